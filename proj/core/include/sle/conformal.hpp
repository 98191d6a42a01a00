#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sle::conformal {

using Complex = std::complex<double>;

// One vertical-slit growth step: driver position u, capacity increment dcap.
// The slit is {u + iy : 0 <= y <= sqrt(2*dcap)}.
struct SlitStep {
  double u = 0.0;
  double dcap = 0.0;
};

// Rectangle (0,L)x(0,i*pi) mapped to the half-plane; xi in (0,1) is the image
// of i*pi under the normalization (0,L,L+i*pi) -> (1,inf,0), rho = 1/(1-xi).
struct RectGeometry {
  double L = 0.0;
  double rho = 0.0;
  double xi = 0.0;
};

// z -> (az+b)/(cz+d), real coefficients, ad-bc > 0.
struct Mobius {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }

  // group law = matrix product
  friend Mobius operator*(const Mobius& m1, const Mobius& m2) {
    return {m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
            m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d};
  }

  // unique self-map of H sending the real triple (x1,x2,x3) to (0,1,inf)
  static Mobius from_real_triple(double x1, double x2, double x3);
};

bool is_point_at_infinity(Complex z);

Complex mobius_apply(const Mobius& m, Complex z);

enum class DiskHalfDirection { DiskToHalf, HalfToDisk };

// f(w) = i(1+w)/(1-w) maps D onto H; the inverse is (z-i)/(z+i).
Complex disk_half_map(Complex z, DiskHalfDirection direction);

// g(z) = u + sqrt((z-u)^2 + 2*dcap), branch chosen so images stay in the
// closed upper half-plane; the slit tip maps to u and vice versa.
Complex slit_forward(Complex z, const SlitStep& s);
Complex slit_inverse(Complex w, const SlitStep& s);

double capacity_sum(std::span<const SlitStep> steps);

// Least-squares-free far-field fit: evaluates the map at i*1e3 and i*1e4 and
// solves the 2x2 system for the odd coefficients of w - z = a1/z + a3/z^3.
// Returns a1.
double fit_farfield_capacity(const std::function<Complex(Complex)>& map);

// rho = 1/(1-xi), L = pi*K'/K.
RectGeometry rect_geometry_from_xi(double xi);

// Psi'(0) for the half-disk hull of radius r centred at x0, |x0| > r > 0:
// g(z) = z + r^2/(z-x0), so Psi'(0) = 1 - r^2/x0^2.
double restriction_derivative_halfdisk(double x0, double r);

// Probability that a Brownian motion from z in (0,L)x(0,i*pi) exits through
// the right edge: sum over odd k of (4/(pi k)) sinh(kx)/sinh(kL) sin(ky).
// n_terms <= 0 selects the count from the tail bound (4/(pi k)) e^{-k(L-x)}.
double excursion_exit_right(Complex z, double L, int n_terms = 0);

}  // namespace sle::conformal
