#pragma once

#include <stdexcept>

namespace sle::sf {

struct HypParams {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double x = 0.0;
};

// K and K' of the rectangle map, together with the branch point rho > 1.
// K'/K is strictly increasing in rho.
struct EllipticPair {
  double K = 0.0;
  double K_prime = 0.0;
  double rho = 0.0;
};

// Gamma function on the real line; poles at non-positive integers raise
// std::domain_error.
double gamma(double x);

// 1/Gamma(x); zero at the poles instead of raising.
double rgamma(double x);

// Digamma (psi) for real non-pole arguments.
double digamma(double x);

// Gauss hypergeometric 2F1(a,b;c;x) for real x < 1.
// Power series on [0, 0.8]; Pfaff transformation for x < 0; the 1-x
// connection formulas (dlmf.nist.gov/15.8, A&S 15.3.6/15.3.10/15.3.11)
// near x -> 1.
double hyp2f1(double a, double b, double c, double x);
double hyp2f1(const HypParams& p);

// sqrt(rho)*K = pi*2F1(1/2,1/2;1;1/rho), sqrt(rho)*K' = pi*2F1(1/2,1/2;1;1-1/rho).
EllipticPair elliptic_pair(double rho);

}  // namespace sle::sf
