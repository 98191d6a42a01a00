#include "sle/exact_formulas.hpp"

#include <cmath>
#include <numeric>

#include "sle/special_functions.hpp"

namespace sle::formulas {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return {g ? num / g : num, g ? den / g : den};
}

double cardy_crossing(double xi, double kappa) {
  if (!(kappa > 4.0))
    throw std::domain_error("cardy_crossing: kappa must be > 4");
  if (!(xi > 0.0 && xi < 1.0))
    throw std::domain_error("cardy_crossing: xi must lie in (0,1)");
  const double r = 4.0 / kappa;
  const double pref = std::pow(2.0, 1.0 - 2.0 * r) * sf::gamma(1.5 - r) /
                      (std::sqrt(M_PI) * sf::gamma(2.0 - r));
  return pref * std::pow(1.0 - xi, 1.0 - r) *
         sf::hyp2f1(1.0 - r, r, 2.0 - r, 1.0 - xi);
}

double one_sided_exponent(double kappa, double lambda) {
  if (!(kappa > 4.0))
    throw std::domain_error("one_sided_exponent: kappa must be > 4");
  if (lambda < 0.0)
    throw std::domain_error("one_sided_exponent: lambda must be >= 0");
  const double km4 = kappa - 4.0;
  return lambda + (km4 + std::sqrt(km4 * km4 + 16.0 * kappa * lambda)) /
                      (2.0 * kappa);
}

double annulus_exponent(double kappa, double lambda) {
  if (!(kappa > 0.0))
    throw std::domain_error("annulus_exponent: kappa must be > 0");
  if (lambda < 0.0)
    throw std::domain_error("annulus_exponent: lambda must be >= 0");
  const double km4 = kappa - 4.0;
  if (lambda == 0.0) return std::max(km4, 0.0) / 8.0;  // lambda -> 0 limit
  return (8.0 * lambda + km4 + std::sqrt(km4 * km4 + 16.0 * kappa * lambda)) /
         16.0;
}

double left_passage(double x0, double y0, double kappa) {
  if (!(y0 > 0.0)) throw std::domain_error("left_passage: y0 must be > 0");
  if (!(kappa > 0.0 && kappa < 8.0))
    throw std::domain_error("left_passage: kappa must lie in (0,8)");
  if (x0 == 0.0) return 0.5;
  const double r = 4.0 / kappa;
  const double w = x0 / y0;
  const double coef =
      sf::gamma(r) / (std::sqrt(M_PI) * sf::gamma((8.0 - kappa) / (2.0 * kappa)));
  return 0.5 + coef * sf::hyp2f1(0.5, r, 1.5, -w * w) * w;
}

double schramm_theta(double theta) {
  if (!(theta > 0.0 && theta < 2.0 * M_PI))
    throw std::domain_error("schramm_theta: theta must lie in (0, 2*pi)");
  const double ct = 1.0 / std::tan(0.5 * theta);
  const double coef =
      sf::gamma(2.0 / 3.0) / (std::sqrt(M_PI) * sf::gamma(1.0 / 6.0));
  return 0.5 - coef * sf::hyp2f1(0.5, 2.0 / 3.0, 1.5, -ct * ct) * ct;
}

double bm_halfplane_exponent(std::span<const double> lambdas) {
  if (lambdas.empty())
    throw std::domain_error("bm_halfplane_exponent: empty packet");
  double s = 0.0;
  for (double l : lambdas) {
    if (l < 0.0)
      throw std::domain_error("bm_halfplane_exponent: lambda must be >= 0");
    s += std::sqrt(1.0 + 24.0 * l);
  }
  const double k = static_cast<double>(lambdas.size());
  const double t = s - (k - 1.0);
  return (t * t - 1.0) / 24.0;
}

double bm_plane_exponent(std::span<const double> lambdas) {
  if (lambdas.size() < 2)
    throw std::domain_error("bm_plane_exponent: need at least two packets");
  int at_least_one = 0;
  double s = 0.0;
  for (double l : lambdas) {
    if (l < 0.0)
      throw std::domain_error("bm_plane_exponent: lambda must be >= 0");
    if (l >= 1.0) ++at_least_one;
    s += std::sqrt(1.0 + 24.0 * l);
  }
  if (at_least_one < 2)
    throw std::domain_error(
        "bm_plane_exponent: at least two arguments must be >= 1");
  const double k = static_cast<double>(lambdas.size());
  const double t = s - k;
  return (t * t - 4.0) / 48.0;
}

double bm_mixed_exponent(int k, double lambda) {
  if (k < 1) throw std::domain_error("bm_mixed_exponent: k must be >= 1");
  if (lambda < 0.0)
    throw std::domain_error("bm_mixed_exponent: lambda must be >= 0");
  const double t =
      std::sqrt(1.0 + 24.0 * k) + std::sqrt(1.0 + 24.0 * lambda) - 2.0;
  return (t * t - 4.0) / 48.0;
}

Rational arm_exponent(int k, ArmGeometry geometry) {
  if (k < 1) throw std::domain_error("arm_exponent: k must be >= 1");
  const std::int64_t kk = k;
  if (geometry == ArmGeometry::HalfPlane)
    return make_rational(kk * (kk + 1), 6);
  return make_rational(kk * kk - 1, 12);
}

HausdorffDims hausdorff_dims(double kappa) {
  if (!(kappa > 0.0)) throw std::domain_error("hausdorff_dims: kappa <= 0");
  HausdorffDims out;
  out.trace_dim = std::min(2.0, 1.0 + kappa / 8.0);
  if (kappa > 4.0) {
    out.boundary = HausdorffDims::Boundary{
        1.0 + 2.0 / kappa, kappa == 6.0 || kappa == 8.0};
  }
  return out;
}

double restriction_prob(double psi_prime_0) {
  if (!(psi_prime_0 > 0.0 && psi_prime_0 <= 1.0))
    throw std::domain_error("restriction_prob: argument must lie in (0,1]");
  return std::pow(psi_prime_0, 5.0 / 8.0);
}

ModelParams model_parameter_maps(double kappa) {
  constexpr double lo = 8.0 / 3.0;
  if (!(kappa >= lo && kappa <= 8.0))
    throw std::domain_error("model_parameter_maps: kappa outside [8/3, 8]");
  ModelParams out;
  if (kappa >= 4.0) out.q = 2.0 + 2.0 * std::cos(8.0 * M_PI / kappa);
  out.n = -2.0 * std::cos(4.0 * M_PI / kappa);
  return out;
}

CriticalPoints critical_points(double q, double n) {
  if (q < 0.0) throw std::domain_error("critical_points: q must be >= 0");
  if (!(n >= 0.0 && n <= 2.0))
    throw std::domain_error("critical_points: n must lie in [0,2]");
  return {std::log(1.0 + std::sqrt(q)),
          1.0 / std::sqrt(2.0 + std::sqrt(2.0 - n))};
}

}  // namespace sle::formulas
