#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sle/loewner.hpp"
#include "sle/stats.hpp"

namespace sle::mc {

using loewner::Complex;
using loewner::Trace;

// Comparison of a Monte Carlo estimate against an exact value.
// pass <=> |mean - exact| <= 3*std_err + discretization_allowance.
struct VerificationReport {
  std::string name;
  double exact = 0.0;
  Estimate estimate;
  double z_score = 0.0;
  double discretization_allowance = 0.0;
  bool pass = false;
  double runtime_s = 0.0;
  std::uint64_t seed = 0;
  long discarded = 0;
};

VerificationReport make_report(std::string name, double exact, Estimate est,
                               double allowance, std::uint64_t seed,
                               double runtime_s, long discarded = 0);

// Left/right passage of chordal traces around z0, classified by the winding
// number of trace + far-field closure; compared against the exact
// left-passage law. Horizon is 25*max(1,|z0|^2).
VerificationReport verify_left_passage(double kappa, Complex z0,
                                       std::size_t n_samples, int n_steps,
                                       std::uint64_t seed);

// Crossing frequencies of the xi-rectangle at 2-3 lattice sizes, Richardson
// extrapolated and compared against the crossing formula at kappa = 6.
VerificationReport verify_cardy(double xi, std::span<const int> lattice_sizes,
                                std::size_t n_samples_per_size,
                                std::uint64_t seed);

// Fraction of kappa = 8/3 traces avoiding the half-disk at x0 of radius r,
// followed until escape radius 10|x0|; compared against |Psi'(0)|^{5/8}.
VerificationReport verify_restriction(double x0, double r,
                                      std::size_t n_samples, int n_steps,
                                      std::uint64_t seed);

enum class ArmGeometrySim { HalfPlane, Plane };

// log-log slope of the k-arm crossing frequency over the given outer radii
// (inner radius fixed at 4); regression std error.
Estimate estimate_arm_exponent(std::span<const int> radii,
                               std::size_t n_samples_per_radius,
                               ArmGeometrySim geometry, int k,
                               std::uint64_t seed);

VerificationReport verify_arm_exponent(std::span<const int> radii,
                                       std::size_t n_samples_per_radius,
                                       ArmGeometrySim geometry, int k,
                                       std::uint64_t seed);

// Box-counting dimension of a polyline: least-squares slope of
// log(box count) against log(1/scale). Scales are relative to the curve
// diameter.
Estimate box_counting_dim(const Trace& trace, std::span<const double> scales);

VerificationReport verify_box_dim_kappa6(int n_steps, std::uint64_t seed);

// Diffusivity of extracted driving functions: Var[U_t] regressed against t.
Estimate driving_diffusivity(std::span<const std::vector<Complex>> paths);

// Round trip: sample drivers at kappa, trace, re-extract, estimate
// diffusivity.
VerificationReport verify_driver_roundtrip_diffusivity(double kappa,
                                                       std::size_t n_paths,
                                                       int n_steps,
                                                       std::uint64_t seed);

// LERW on an N x N grid from the center to the boundary, reversed and mapped
// to half-plane coordinates; driving diffusivity should approach 2.
VerificationReport verify_lerw_diffusivity(int grid_n, std::size_t n_paths,
                                           std::uint64_t seed);

// The default verification suite (quick variant for smoke runs).
std::vector<VerificationReport> default_suite(bool quick, std::uint64_t seed);

}  // namespace sle::mc
