#include "sle/special_functions.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "sle/rng.hpp"

namespace sle::rng {

double inverse_normal_cdf(double p) {
  // Wichura, Applied Statistics 37 (1988), algorithm AS 241 (PPND16).
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("inverse_normal_cdf: p outside (0,1)");
  const double q = p - 0.5;
  double r, num, den;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    num = (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
              1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
            1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    den = (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
              5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
            4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  if (r <= 5.0) {
    r -= 1.6;
    num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
              3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
            4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
            2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
            5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  const double v = num / den;
  return q < 0.0 ? -v : v;
}

}  // namespace sle::rng

namespace sle::sf {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 100000;

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

// Direct power series, valid for |x| < 1; terminates exactly when a or b is
// a non-positive integer. Truncation: |term| < kEps*|sum| three times in a
// row, capped at kMaxTerms.
double series_2f1(double a, double b, double c, double x) {
  double term = 1.0, sum = 1.0;
  int small_streak = 0;
  for (int n = 0; n < kMaxTerms; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
    if (term == 0.0) break;
    sum += term;
    if (std::fabs(term) < kEps * std::fabs(sum)) {
      if (++small_streak >= 3) break;
    } else {
      small_streak = 0;
    }
  }
  return sum;
}

double terminating_2f1(double a, double b, double c, double x) {
  // a is a non-positive integer; finite sum of -a+1 terms.
  const int m = static_cast<int>(-a);
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < m; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
    sum += term;
  }
  return sum;
}

double hyp2f1_impl(double a, double b, double c, double x);

// A&S 15.3.6: connection with argument 1-x, c-a-b not an integer.
double connect_generic(double a, double b, double c, double x) {
  const double w = 1.0 - x;
  const double s = c - a - b;
  const double c1 = gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b);
  const double c2 = gamma(c) * gamma(-s) * rgamma(a) * rgamma(b);
  double out = 0.0;
  if (c1 != 0.0) out += c1 * series_2f1(a, b, 1.0 - s, w);
  if (c2 != 0.0) out += c2 * std::pow(w, s) * series_2f1(c - a, c - b, 1.0 + s, w);
  return out;
}

// A&S 15.3.10 / 15.3.11: c = a + b + m with integer m >= 0, log case.
double connect_log(double a, double b, int m, double x) {
  const double w = 1.0 - x;
  const double lw = std::log(w);
  const double c = a + b + m;
  double out = 0.0;

  if (m > 0) {
    // finite part
    double coef = gamma(m) * gamma(c) * rgamma(a + m) * rgamma(b + m);
    if (coef != 0.0) {
      double term = 1.0, sum = 1.0;
      for (int n = 0; n + 1 < m; ++n) {
        term *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - m + n)) * w;
        sum += term;
      }
      out += coef * sum;
    }
  }

  double coef2 = gamma(c) * rgamma(a) * rgamma(b);
  if (coef2 != 0.0) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    double fac = 1.0;  // (a+m)_n (b+m)_n / (n! (n+m)!) * w^n, times w^m below
    for (int i = 1; i <= m; ++i) fac /= i;
    double sum = 0.0;
    double psi_a = digamma(a + m), psi_b = digamma(b + m);
    double psi_1 = digamma(1.0), psi_m1 = digamma(m + 1.0);
    int small_streak = 0;
    for (int n = 0; n < kMaxTerms; ++n) {
      const double bracket = lw - psi_1 - psi_m1 + psi_a + psi_b;
      const double term = fac * bracket;
      sum += term;
      if (std::fabs(term) < kEps * (std::fabs(sum) + 1e-300)) {
        if (++small_streak >= 3) break;
      } else {
        small_streak = 0;
      }
      fac *= (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0)) * w;
      psi_1 += 1.0 / (n + 1.0);
      psi_m1 += 1.0 / (n + m + 1.0);
      psi_a += 1.0 / (a + m + n);
      psi_b += 1.0 / (b + m + n);
    }
    out -= sign * coef2 * std::pow(w, m) * sum;
  }
  return out;
}

double hyp2f1_near_one(double a, double b, double c, double x) {
  const double s = c - a - b;
  const double sr = std::round(s);
  if (std::fabs(s - sr) > 1e-7) return connect_generic(a, b, c, x);
  const int m = static_cast<int>(sr);
  if (m >= 0) return connect_log(a, b, m, x);
  // Euler transformation flips the sign of c-a-b.
  return std::pow(1.0 - x, s) * connect_log(c - a, c - b, -m, x);
}

double hyp2f1_impl(double a, double b, double c, double x) {
  if (is_nonpositive_integer(a)) return terminating_2f1(a, b, c, x);
  if (is_nonpositive_integer(b)) return terminating_2f1(b, a, c, x);
  if (x < 0.0) {
    // Pfaff 15.3.4: argument moves to [0,1).
    return std::pow(1.0 - x, -a) * hyp2f1_impl(a, c - b, c, x / (x - 1.0));
  }
  if (x <= 0.8) return series_2f1(a, b, c, x);
  return hyp2f1_near_one(a, b, c, x);
}

}  // namespace

double gamma(double x) {
  if (is_nonpositive_integer(x))
    throw std::domain_error("gamma: pole at non-positive integer");
  return std::tgamma(x);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

double digamma(double x) {
  if (is_nonpositive_integer(x))
    throw std::domain_error("digamma: pole at non-positive integer");
  if (x < 0.0) {
    // reflection: psi(x) = psi(1-x) - pi*cot(pi*x)
    return digamma(1.0 - x) - M_PI / std::tan(M_PI * x);
  }
  double acc = 0.0;
  while (x < 6.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / x, r2 = r * r;
  // asymptotic expansion with Bernoulli coefficients
  double psi = std::log(x) - 0.5 * r;
  psi -= r2 * (1.0 / 12.0 - r2 * (1.0 / 120.0 - r2 * (1.0 / 252.0 -
          r2 * (1.0 / 240.0 - r2 * (1.0 / 132.0 - r2 * 691.0 / 32760.0)))));
  return psi + acc;
}

double hyp2f1(double a, double b, double c, double x) {
  if (is_nonpositive_integer(c))
    throw std::domain_error("hyp2f1: c is a non-positive integer");
  if (x >= 1.0) throw std::domain_error("hyp2f1: x must be < 1");
  return hyp2f1_impl(a, b, c, x);
}

double hyp2f1(const HypParams& p) { return hyp2f1(p.a, p.b, p.c, p.x); }

EllipticPair elliptic_pair(double rho) {
  if (!(rho > 1.0)) throw std::domain_error("elliptic_pair: rho must be > 1");
  EllipticPair out;
  out.rho = rho;
  const double sr = std::sqrt(rho);
  out.K = M_PI * hyp2f1(0.5, 0.5, 1.0, 1.0 / rho) / sr;
  out.K_prime = M_PI * hyp2f1(0.5, 0.5, 1.0, 1.0 - 1.0 / rho) / sr;
  return out;
}

}  // namespace sle::sf
