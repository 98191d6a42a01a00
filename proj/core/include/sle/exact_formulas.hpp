#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

namespace sle::formulas {

// Exact rational; arm exponents are closed rationals.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / den; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);

// Crossing probability of the conformal rectangle with cross-ratio parameter
// xi, kappa > 4 (Cardy's formula at kappa = 6):
//   f(xi) = 2^(1-8/k) Gamma(3/2-4/k) / (sqrt(pi) Gamma(2-4/k))
//           * (1-xi)^(1-4/k) * 2F1(1-4/k, 4/k; 2-4/k; 1-xi)
double cardy_crossing(double xi, double kappa);

// u(kappa,lambda) = lambda + (kappa-4+sqrt((kappa-4)^2+16*kappa*lambda))/(2 kappa)
double one_sided_exponent(double kappa, double lambda);

// nu(kappa,lambda) = (8 lambda + kappa - 4 + sqrt((kappa-4)^2+16*kappa*lambda))/16
double annulus_exponent(double kappa, double lambda);

// P[trace passes left of x0 + i y0], kappa in (0,8):
//   1/2 + Gamma(4/k)/(sqrt(pi) Gamma((8-k)/(2k)))
//       * 2F1(1/2, 4/k; 3/2; -x0^2/y0^2) * x0/y0
double left_passage(double x0, double y0, double kappa);

// P[blue cluster attached to the arc (0,theta) of the unit circle surrounds
// the origin] for critical percolation.
double schramm_theta(double theta);

// Half-plane Brownian intersection exponents; k = 1 is the identity packet.
double bm_halfplane_exponent(std::span<const double> lambdas);

// Whole-plane exponents; at least two arguments must be >= 1.
double bm_plane_exponent(std::span<const double> lambdas);

// xi(k, lambda) for an integer packet k >= 1 against lambda >= 0.
double bm_mixed_exponent(int k, double lambda);

enum class ArmGeometry { HalfPlane, Plane };

// v+_k = k(k+1)/6, v_k = (k^2-1)/12.
Rational arm_exponent(int k, ArmGeometry geometry);

struct HausdorffDims {
  double trace_dim = 0.0;
  struct Boundary {
    double dim = 0.0;
    bool proven = false;  // proven only for kappa = 6 and kappa = 8
  };
  std::optional<Boundary> boundary;
};

// trace dimension min(2, 1+kappa/8); hull-boundary dimension 1+2/kappa for
// kappa > 4 (conjectured except kappa in {6,8}).
HausdorffDims hausdorff_dims(double kappa);

// |Psi'(0)|^(5/8), the restriction probability of SLE(8/3).
double restriction_prob(double psi_prime_0);

struct ModelParams {
  std::optional<double> q;  // Potts, kappa in [4,8]: q = 2 + 2cos(8 pi/kappa)
  std::optional<double> n;  // O(n), kappa in [8/3,8]: n = -2 cos(4 pi/kappa)
};

ModelParams model_parameter_maps(double kappa);

struct CriticalPoints {
  double beta_c = 0.0;  // exp(beta_c) = 1 + sqrt(q)
  double x_c = 0.0;     // x_c = 1/sqrt(2 + sqrt(2-n))
};

CriticalPoints critical_points(double q, double n);

// Monochromatic one-arm plane exponent, stored constant.
inline constexpr double kOneArmMonochromatic = 5.0 / 48.0;

}  // namespace sle::formulas
