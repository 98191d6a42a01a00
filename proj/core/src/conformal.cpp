#include "sle/conformal.hpp"

#include <cmath>
#include <limits>

#include "sle/special_functions.hpp"

namespace sle::conformal {

namespace {

// sqrt with image in the closed upper half-plane; on the positive real axis
// the sign is resolved by the caller via `real_sign`.
Complex upper_sqrt(Complex w, double real_sign) {
  Complex r = std::sqrt(w);
  if (r.imag() < 0.0) r = -r;
  if (r.imag() == 0.0 && real_sign < 0.0) r = -r;
  return r;
}

}  // namespace

bool is_point_at_infinity(Complex z) {
  return std::isinf(z.real()) || std::isinf(z.imag());
}

Mobius Mobius::from_real_triple(double x1, double x2, double x3) {
  // z -> (z-x1)(x2-x3) / ((z-x3)(x2-x1))
  const double p = x2 - x3, q = x2 - x1;
  Mobius m{p, -x1 * p, q, -x3 * q};
  if (m.det() <= 0.0) m = {-m.a, -m.b, -m.c, -m.d};
  return m;
}

Complex mobius_apply(const Mobius& m, Complex z) {
  if (m.det() <= 0.0) throw std::domain_error("mobius_apply: ad-bc must be > 0");
  const Complex den = m.c * z + m.d;
  if (std::abs(den) == 0.0) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
  return (m.a * z + m.b) / den;
}

Complex disk_half_map(Complex z, DiskHalfDirection direction) {
  constexpr double tol = 1e-12;
  const Complex i{0.0, 1.0};
  if (direction == DiskHalfDirection::DiskToHalf) {
    if (std::abs(z) > 1.0 + tol)
      throw std::domain_error("disk_half_map: |z| must be <= 1");
    if (std::abs(z - 1.0) < tol)
      throw std::domain_error("disk_half_map: pole at z = 1");
    return i * (1.0 + z) / (1.0 - z);
  }
  if (z.imag() < -tol)
    throw std::domain_error("disk_half_map: Im z must be >= 0");
  return (z - i) / (z + i);
}

Complex slit_forward(Complex z, const SlitStep& s) {
  if (s.dcap < 0.0) throw std::domain_error("slit_forward: dcap must be >= 0");
  const Complex d = z - s.u;
  return s.u + upper_sqrt(d * d + 2.0 * s.dcap, d.real());
}

Complex slit_inverse(Complex w, const SlitStep& s) {
  if (s.dcap < 0.0) throw std::domain_error("slit_inverse: dcap must be >= 0");
  const Complex d = w - s.u;
  return s.u + upper_sqrt(d * d - 2.0 * s.dcap, d.real());
}

double capacity_sum(std::span<const SlitStep> steps) {
  double total = 0.0;
  for (const auto& s : steps) total += s.dcap;
  return total;
}

double fit_farfield_capacity(const std::function<Complex(Complex)>& map) {
  // On the imaginary axis a1 and a3 show up in the imaginary part only:
  // Im(map(iy) - iy) = -a1/y + a3/y^3 + O(y^-5).
  const double y1 = 1e3, y2 = 1e4;
  const double d1 = (map(Complex{0.0, y1}) - Complex{0.0, y1}).imag();
  const double d2 = (map(Complex{0.0, y2}) - Complex{0.0, y2}).imag();
  // [-1/y1  1/y1^3] [a1]   [d1]
  // [-1/y2  1/y2^3] [a3] = [d2]
  const double det = -1.0 / y1 * 1.0 / (y2 * y2 * y2) + 1.0 / y2 / (y1 * y1 * y1);
  return (d1 / (y2 * y2 * y2) - d2 / (y1 * y1 * y1)) / det;
}

RectGeometry rect_geometry_from_xi(double xi) {
  if (!(xi > 0.0 && xi < 1.0))
    throw std::domain_error("rect_geometry_from_xi: xi must lie in (0,1)");
  RectGeometry g;
  g.xi = xi;
  g.rho = 1.0 / (1.0 - xi);
  const auto ell = sf::elliptic_pair(g.rho);
  g.L = M_PI * ell.K_prime / ell.K;
  return g;
}

double restriction_derivative_halfdisk(double x0, double r) {
  if (!(r > 0.0) || std::fabs(x0) <= r)
    throw std::domain_error("restriction_derivative_halfdisk: need |x0| > r > 0");
  return 1.0 - (r * r) / (x0 * x0);
}

double excursion_exit_right(Complex z, double L, int n_terms) {
  const double x = z.real(), y = z.imag();
  if (!(x > 0.0 && x < L && y > 0.0 && y < M_PI))
    throw std::domain_error("excursion_exit_right: z outside open rectangle");
  int kmax;
  if (n_terms > 0) {
    kmax = 2 * n_terms - 1;
  } else {
    // tail bound (4/(pi k)) e^{-k(L-x)} < 1e-12
    const double gap = L - x;
    double k = 1.0;
    while ((4.0 / (M_PI * k)) * std::exp(-k * gap) >= 1e-12 && k < 1e7) k += 2.0;
    kmax = static_cast<int>(k);
  }
  double sum = 0.0;
  for (int k = 1; k <= kmax; k += 2) {
    // sinh(kx)/sinh(kL) computed via exponentials; kL can exceed 700.
    const double ratio = std::exp(static_cast<double>(k) * (x - L)) *
                         (1.0 - std::exp(-2.0 * k * x)) /
                         (1.0 - std::exp(-2.0 * k * L));
    sum += (4.0 / (M_PI * k)) * ratio * std::sin(k * y);
  }
  return sum;
}

}  // namespace sle::conformal
