#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sle/conformal.hpp"

namespace sle::loewner {

using conformal::Complex;

// Sampled driving function U_t on a strictly increasing time grid starting at
// 0; capacity parameterization a1(K_t) = 2t is implied by the time axis.
struct Driver {
  std::vector<double> times;
  std::vector<double> values;
  std::optional<double> kappa_hint;

  std::size_t size() const { return times.size(); }
  double horizon() const { return times.empty() ? 0.0 : times.back(); }
  void validate() const;
};

enum class TraceFlavor { Chordal, Radial };

struct Trace {
  std::vector<double> times;
  std::vector<Complex> points;
  TraceFlavor flavor = TraceFlavor::Chordal;
};

struct SwallowResult {
  bool swallowed = false;
  double tau = std::numeric_limits<double>::infinity();
  Complex g_T{0.0, 0.0};  // final image when not swallowed
};

// sqrt(kappa) * Brownian motion on a uniform grid of n_steps steps.
Driver sample_driver(double kappa, double horizon, int n_steps,
                     std::uint64_t seed);

// Same driving process on an arbitrary strictly increasing grid (times[0]=0);
// increments are independent normals of variance kappa * dt.
Driver sample_driver_on_grid(double kappa, std::vector<double> times,
                             std::uint64_t seed);

// Exact per-step vertical-slit evolution of one point under the
// piecewise-constant driver. Swallowing is declared when the image comes
// within min_im of the driver position (interior points also when their
// height collapses below min_im); a point exactly above the driver is
// resolved in closed form mid-step.
SwallowResult evolve_point(const Driver& d, Complex z, double min_im = 1e-9);

// Trace via the inverse slit flow; gamma(t_k) is the image of the slit tip
// under the inverses of steps k-1, ..., 0. O(n^2); parallelized across
// points for large n.
Trace chordal_trace(const Driver& d, double tip_eps = 0.0);

struct UnzipFailure : std::runtime_error {
  std::size_t index;
  explicit UnzipFailure(std::size_t idx)
      : std::runtime_error("extract_driving: path not simple at vertex " +
                           std::to_string(idx)),
        index(idx) {}
};

// Driving-function extraction (unzipping) from a polyline that starts on the
// real axis and stays in the closed upper half-plane. Each step removes the
// first point p via the vertical slit with tip p (u = Re p, dcap = (Im p)^2/2);
// long steps are subdivided so no single step carries more than
// max_step_cap_fraction of the total-capacity estimate.
Driver extract_driving(std::span<const Complex> path,
                       double max_step_cap_fraction = 1e-3);
Driver extract_driving(const Trace& path,
                       double max_step_cap_fraction = 1e-3);

// Radial SLE trace in the closed unit disk, started at 1, driver
// W_t = exp(i sqrt(kappa) B_t), parameterized by g_t'(0) = exp(t).
// Backward RK4 of the reversed radial equation.
Trace radial_trace(double kappa, double horizon, int n_steps,
                   std::uint64_t seed);

// Forward RK4 evolution of one point of the disk under the radial equation
// driven by W_t = exp(i * d.values); used for the g_t'(0) = e^t check.
Complex radial_evolve_point(const Driver& d, Complex z, int substeps_per_step = 8);

// Slit-step view of a driver (step j covers [times[j], times[j+1]) at driver
// value values[j]).
std::vector<conformal::SlitStep> driver_steps(const Driver& d);

}  // namespace sle::loewner
