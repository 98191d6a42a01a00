#include "sle/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <unordered_set>

#include "sle/discrete_models.hpp"
#include "sle/exact_formulas.hpp"
#include "sle/parallel.hpp"
#include "sle/rng.hpp"

namespace sle::mc {

using conformal::SlitStep;
using loewner::Driver;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double winding_turns(std::span<const Complex> poly, Complex z0) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i)
    total += std::arg((poly[i + 1] - z0) / (poly[i] - z0));
  return total / (2.0 * M_PI);
}

// winding of trace + closure (radial escape, far upper arc, return along the
// real axis); nonzero <=> the trace passed to the left of z0
bool passed_left(std::span<const Complex> trace, Complex z0, double far_radius) {
  std::vector<Complex> poly(trace.begin(), trace.end());
  const Complex last = poly.back();
  const double r = std::abs(last);
  const Complex dir = r > 1e-12 ? last / r : Complex{0.0, 1.0};
  poly.push_back(dir * far_radius);                       // radial escape
  poly.push_back(Complex{far_radius, 0.5 * far_radius});  // far arc
  poly.push_back(Complex{far_radius, 0.0});               // touch down at +inf
  poly.push_back(Complex{0.0, 0.0});                      // back along the axis
  const double w = winding_turns(poly, z0);
  return std::lround(w) != 0;
}

}  // namespace

VerificationReport make_report(std::string name, double exact, Estimate est,
                               double allowance, std::uint64_t seed,
                               double runtime_s, long discarded) {
  VerificationReport r;
  r.name = std::move(name);
  r.exact = exact;
  r.estimate = est;
  r.discretization_allowance = allowance;
  r.z_score = est.std_err > 0.0 ? (est.mean - exact) / est.std_err : 0.0;
  r.pass = std::fabs(est.mean - exact) <= 3.0 * est.std_err + allowance;
  r.runtime_s = runtime_s;
  r.seed = seed;
  r.discarded = discarded;
  return r;
}

VerificationReport verify_left_passage(double kappa, Complex z0,
                                       std::size_t n_samples, int n_steps,
                                       std::uint64_t seed) {
  if (!(z0.imag() > 0.0))
    throw std::domain_error("verify_left_passage: Im z0 must be > 0");
  const double exact = formulas::left_passage(z0.real(), z0.imag(), kappa);
  const double horizon = 25.0 * std::max(1.0, std::norm(z0));
  const double far_radius = 40.0 * std::sqrt(horizon);
  const double t0 = now_seconds();

  const auto res = mc_mean(n_samples, seed, [&](std::uint64_t s) -> std::optional<double> {
    const Driver d = loewner::sample_driver(kappa, horizon, n_steps, s);
    const auto steps = loewner::driver_steps(d);
    // swallow time bounds the usable part of the trace for kappa > 4
    std::size_t cut = d.size() - 1;
    if (kappa > 4.0) {
      const auto sw = loewner::evolve_point(d, z0);
      if (sw.swallowed) {
        cut = 1;
        while (cut + 1 < d.size() && d.times[cut] < sw.tau) ++cut;
      }
    }
    std::vector<Complex> pts(cut + 1);
    pts[0] = Complex{d.values[0], 0.0};
    for (std::size_t k = 1; k <= cut; ++k) {
      Complex w{steps[k - 1].u, 0.0};
      w = conformal::slit_inverse(w, steps[k - 1]);
      for (std::size_t j = k - 1; j-- > 0;)
        w = conformal::slit_inverse(w, steps[j]);
      pts[k] = w;
    }
    if (std::abs(pts[cut] - z0) < 0.05 * z0.imag())
      return std::nullopt;  // ended on top of z0, unresolved
    return passed_left(pts, z0, far_radius) ? 1.0 : 0.0;
  });

  return make_report("left_passage", exact, res.estimate, 0.02, seed,
                     now_seconds() - t0, res.discarded);
}

VerificationReport verify_cardy(double xi, std::span<const int> lattice_sizes,
                                std::size_t n_samples_per_size,
                                std::uint64_t seed) {
  if (lattice_sizes.size() < 2 || lattice_sizes.size() > 3)
    throw std::invalid_argument("verify_cardy: need 2 or 3 lattice sizes");
  const double exact = formulas::cardy_crossing(xi, 6.0);
  const double t0 = now_seconds();

  std::vector<double> p(lattice_sizes.size()), sig(lattice_sizes.size());
  for (std::size_t si = 0; si < lattice_sizes.size(); ++si) {
    const int size = lattice_sizes[si];
    const std::uint64_t sub = rng::substream(seed, 1000 + si);
    const auto res = mc_mean(n_samples_per_size, sub, [&](std::uint64_t s) {
      return std::optional<double>(
          discrete::crossing_event_rect(xi, size, s) ? 1.0 : 0.0);
    });
    p[si] = res.estimate.mean;
    sig[si] = res.estimate.std_err;
  }

  // Richardson extrapolation assuming p(N) ~ p_inf + c N^{-a} on a doubling
  // ladder; falls back to the finest size when the increments are noisy.
  Estimate est;
  est.n = static_cast<long>(n_samples_per_size * lattice_sizes.size());
  if (p.size() == 2) {
    est.mean = p[1];
    est.std_err = sig[1];
  } else {
    const double d1 = p[1] - p[0], d2 = p[2] - p[1];
    const double q = d1 != 0.0 ? d2 / d1 : 0.0;
    if (q > 0.02 && q < 0.9) {
      est.mean = p[2] + d2 * q / (1.0 - q);
      // exact gradient of p3 + d2^2/(d1-d2)
      const double den = (d1 - d2) * (d1 - d2);
      const double g1 = d2 * d2 / den;
      const double g2 = -2.0 * d2 * d1 / den;
      const double g3 = 1.0 + (2.0 * d2 * (d1 - d2) + d2 * d2) / den;
      est.std_err = std::sqrt(g1 * g1 * sig[0] * sig[0] +
                              g2 * g2 * sig[1] * sig[1] +
                              g3 * g3 * sig[2] * sig[2]);
    } else {
      est.mean = p[2];
      est.std_err = sig[2];
    }
  }
  return make_report("cardy_crossing", exact, est, 0.02, seed,
                     now_seconds() - t0);
}

VerificationReport verify_restriction(double x0, double r,
                                      std::size_t n_samples, int n_steps,
                                      std::uint64_t seed) {
  const double psi = conformal::restriction_derivative_halfdisk(x0, r);
  const double exact = formulas::restriction_prob(psi);
  const double escape_radius = 10.0 * std::fabs(x0);
  // escape needs capacity ~ R^2/2, i.e. t ~ R^2/4; allow a factor 4 slack
  const double horizon = escape_radius * escape_radius;
  const double t0 = now_seconds();

  // sqrt-spaced grid: fine near t = 0 where the trace passes the hull
  std::vector<double> times(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) {
    const double f = static_cast<double>(k) / n_steps;
    times[k] = horizon * f * f;
  }

  const auto res = mc_mean(n_samples, seed, [&](std::uint64_t s) -> std::optional<double> {
    const Driver d = loewner::sample_driver_on_grid(8.0 / 3.0, times, s);
    const auto steps = loewner::driver_steps(d);
    for (std::size_t k = 1; k < d.size(); ++k) {
      Complex w{steps[k - 1].u, 0.0};
      w = conformal::slit_inverse(w, steps[k - 1]);
      for (std::size_t j = k - 1; j-- > 0;)
        w = conformal::slit_inverse(w, steps[j]);
      if (std::abs(w - Complex{x0, 0.0}) <= r) return 0.0;  // hit the hull
      if (std::abs(w) >= escape_radius) return 1.0;         // escaped
    }
    return 1.0;  // never hit within the horizon
  });

  return make_report("restriction_prob", exact, res.estimate, 0.03, seed,
                     now_seconds() - t0, res.discarded);
}

namespace {

// Triangular lattice in offset rows; site (i,j) at (i + (j&1)/2, j*sqrt(3)/2).
// Blue crossing between the radius-r0 and radius-R circles, restricted to the
// upper half-plane for the half-plane geometry. For k = 2 (plane) the event
// asks for a blue and a yellow crossing.
bool arm_crossing_sample(int R, ArmGeometrySim geom, int k, std::uint64_t seed) {
  const double r0 = 4.0;
  const int jmax = static_cast<int>(std::ceil(R / 0.8660254037844386)) + 1;
  const int jmin = geom == ArmGeometrySim::HalfPlane ? 0 : -jmax;
  const int imax = R + 2, imin = -imax;
  const int w = imax - imin + 1, h = jmax - jmin + 1;
  const auto idx = [&](int i, int j) { return (j - jmin) * w + (i - imin); };

  std::vector<std::uint8_t> blue(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(w) * h, 0);
  const rng::Counter ctr(seed);
  for (int j = jmin; j <= jmax; ++j)
    for (int i = imin; i <= imax; ++i) {
      const double x = i + 0.5 * (j & 1), y = j * 0.8660254037844386;
      const double rr = std::sqrt(x * x + y * y);
      if (rr > R) continue;
      inside[idx(i, j)] = 1;
      blue[idx(i, j)] = (ctr.bits(idx(i, j)) >> 63) & 1;
    }

  // union-find over sites of one color; 2 virtual nodes: inner, outer
  const int inner = w * h, outer = w * h + 1;
  const auto run = [&](bool want_blue) {
    std::vector<int> id(w * h + 2);
    for (int i = 0; i < w * h + 2; ++i) id[i] = i;
    const std::function<int(int)> find = [&](int p) {
      while (p != id[p]) {
        id[p] = id[id[p]];
        p = id[p];
      }
      return p;
    };
    const auto merge = [&](int a, int b) { id[find(a)] = find(b); };
    for (int j = jmin; j <= jmax; ++j)
      for (int i = imin; i <= imax; ++i) {
        if (!inside[idx(i, j)] || (blue[idx(i, j)] != 0) != want_blue) continue;
        const double x = i + 0.5 * (j & 1), y = j * 0.8660254037844386;
        const double rr = std::sqrt(x * x + y * y);
        if (rr <= r0 + 1.0) merge(idx(i, j), inner);
        if (rr >= R - 1.0) merge(idx(i, j), outer);
        // neighbors: (i+1,j), row above (two sites)
        const int shift = (j & 1) ? +1 : -1;
        const int ni[3] = {i + 1, i, i + shift};
        const int nj[3] = {j, j + 1, j + 1};
        for (int t = 0; t < 3; ++t) {
          if (ni[t] < imin || ni[t] > imax || nj[t] > jmax) continue;
          if (nj[t] < jmin) continue;
          const int u = idx(ni[t], nj[t]);
          if (inside[u] && (blue[u] != 0) == want_blue)
            merge(idx(i, j), u);
        }
      }
    return find(inner) == find(outer);
  };

  if (geom == ArmGeometrySim::HalfPlane || k == 1) return run(true);
  return run(true) && run(false);  // dichromatic pair of arms
}

}  // namespace

Estimate estimate_arm_exponent(std::span<const int> radii,
                               std::size_t n_samples_per_radius,
                               ArmGeometrySim geometry, int k,
                               std::uint64_t seed) {
  if (radii.size() < 2)
    throw std::invalid_argument("estimate_arm_exponent: need >= 2 radii");
  if ((geometry == ArmGeometrySim::HalfPlane && k != 1) ||
      (geometry == ArmGeometrySim::Plane && k != 2))
    throw std::invalid_argument(
        "estimate_arm_exponent: only the half-plane one-arm and plane "
        "dichromatic two-arm events are simulated");
  std::vector<double> lx(radii.size()), ly(radii.size()), ls(radii.size());
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const std::uint64_t sub = rng::substream(seed, 2000 + ri);
    const auto res = mc_mean(n_samples_per_radius, sub, [&](std::uint64_t s) {
      return std::optional<double>(
          arm_crossing_sample(radii[ri], geometry, k, s) ? 1.0 : 0.0);
    });
    const double p = res.estimate.mean;
    if (p <= 0.0)
      throw std::runtime_error("estimate_arm_exponent: zero crossing count");
    lx[ri] = std::log(static_cast<double>(radii[ri]));
    ly[ri] = std::log(p);
    ls[ri] = res.estimate.std_err / p;  // sigma of log p
  }
  const LineFit fit = weighted_linear_fit(lx, ly, ls);
  Estimate est;
  est.mean = fit.slope;
  est.std_err = fit.slope_err;
  est.n = static_cast<long>(n_samples_per_radius * radii.size());
  return est;
}

VerificationReport verify_arm_exponent(std::span<const int> radii,
                                       std::size_t n_samples_per_radius,
                                       ArmGeometrySim geometry, int k,
                                       std::uint64_t seed) {
  const double t0 = now_seconds();
  const auto est =
      estimate_arm_exponent(radii, n_samples_per_radius, geometry, k, seed);
  const auto geom = geometry == ArmGeometrySim::HalfPlane
                        ? formulas::ArmGeometry::HalfPlane
                        : formulas::ArmGeometry::Plane;
  const double exact = -formulas::arm_exponent(k, geom).value();
  return make_report(geometry == ArmGeometrySim::HalfPlane
                         ? "arm_exponent_halfplane"
                         : "arm_exponent_plane",
                     exact, est, 0.08, seed, now_seconds() - t0);
}

Estimate box_counting_dim(const Trace& trace, std::span<const double> scales) {
  if (trace.points.size() < 2)
    throw std::invalid_argument("box_counting_dim: trivial trace");
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const auto& p : trace.points) {
    lo_x = std::min(lo_x, p.real());
    hi_x = std::max(hi_x, p.real());
    lo_y = std::min(lo_y, p.imag());
    hi_y = std::max(hi_y, p.imag());
  }
  const double diam = std::max(hi_x - lo_x, hi_y - lo_y);
  std::vector<double> lx, ly;
  for (const double rel : scales) {
    const double s = rel * diam;
    std::unordered_set<long long> boxes;
    for (std::size_t i = 0; i + 1 < trace.points.size(); ++i) {
      const Complex a = trace.points[i], b = trace.points[i + 1];
      const double len = std::abs(b - a);
      const int nsub = std::max(1, static_cast<int>(std::ceil(len / (0.5 * s))));
      for (int t = 0; t <= nsub; ++t) {
        const Complex p = a + (b - a) * (static_cast<double>(t) / nsub);
        const long long bx = static_cast<long long>(std::floor((p.real() - lo_x) / s));
        const long long by = static_cast<long long>(std::floor((p.imag() - lo_y) / s));
        boxes.insert(bx * (1LL << 32) + by);
      }
    }
    lx.push_back(std::log(1.0 / s));
    ly.push_back(std::log(static_cast<double>(boxes.size())));
  }
  const LineFit fit = linear_fit(lx, ly);
  Estimate est;
  est.mean = fit.slope;
  est.std_err = fit.slope_err;
  est.n = static_cast<long>(scales.size());
  return est;
}

VerificationReport verify_box_dim_kappa6(int n_steps, std::uint64_t seed) {
  const double t0 = now_seconds();
  const Driver d = loewner::sample_driver(6.0, 1.0, n_steps, seed);
  const Trace tr = loewner::chordal_trace(d);
  const double scales[] = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  const auto est = box_counting_dim(tr, scales);
  return make_report("box_dim_kappa6", 1.75, est, 0.1, seed,
                     now_seconds() - t0);
}

Estimate driving_diffusivity(std::span<const std::vector<Complex>> paths) {
  if (paths.size() < 2)
    throw std::invalid_argument("driving_diffusivity: need >= 2 paths");
  std::vector<Driver> drivers;
  drivers.reserve(paths.size());
  double t_common = 1e300;
  for (const auto& p : paths) {
    drivers.push_back(loewner::extract_driving(p));
    t_common = std::min(t_common, drivers.back().horizon());
  }
  constexpr int kGrid = 16;
  std::vector<RunningStat> var_at(kGrid);
  for (const auto& d : drivers) {
    std::size_t j = 0;
    for (int g = 0; g < kGrid; ++g) {
      const double t = t_common * (g + 1.0) / kGrid;
      while (j + 1 < d.times.size() && d.times[j + 1] <= t) ++j;
      // piecewise linear interpolation of U at t
      double u = d.values[j];
      if (j + 1 < d.times.size() && d.times[j + 1] > d.times[j]) {
        const double f = (t - d.times[j]) / (d.times[j + 1] - d.times[j]);
        u += f * (d.values[j + 1] - d.values[j]);
      }
      var_at[g].push(u);
    }
  }
  // each Var[U_t]/t estimates kappa; average them, error from the path count
  double sum = 0.0;
  for (int g = 0; g < kGrid; ++g) {
    const double t = t_common * (g + 1.0) / kGrid;
    const double var = var_at[g].m2() / (var_at[g].n() - 1.0);
    sum += var / t;
  }
  Estimate est;
  est.mean = sum / kGrid;
  est.n = static_cast<long>(paths.size());
  est.std_err = est.mean * std::sqrt(2.0 / (paths.size() - 1.0));
  return est;
}

VerificationReport verify_driver_roundtrip_diffusivity(double kappa,
                                                       std::size_t n_paths,
                                                       int n_steps,
                                                       std::uint64_t seed) {
  const double t0 = now_seconds();
  std::vector<std::vector<Complex>> paths(n_paths);
  par::parallel_for(n_paths, [&](std::size_t i) {
    const Driver d =
        loewner::sample_driver(kappa, 1.0, n_steps, rng::substream(seed, i));
    paths[i] = loewner::chordal_trace(d).points;
  });
  auto est = driving_diffusivity(paths);
  return make_report("driver_roundtrip_diffusivity", kappa, est, 0.05, seed,
                     now_seconds() - t0);
}

VerificationReport verify_lerw_diffusivity(int grid_n, std::size_t n_paths,
                                           std::uint64_t seed) {
  const double t0 = now_seconds();
  const discrete::LatticeGraph g = discrete::make_grid_graph(grid_n + 1, grid_n + 1);
  std::unordered_set<int> boundary;
  for (int i = 0; i <= grid_n; ++i)
    for (int j = 0; j <= grid_n; ++j)
      if (i == 0 || j == 0 || i == grid_n || j == grid_n)
        boundary.insert(j * (grid_n + 1) + i);
  const int center = (grid_n / 2) * (grid_n + 1) + grid_n / 2;

  std::vector<std::vector<Complex>> paths(n_paths);
  par::parallel_for(n_paths, [&](std::size_t pi) {
    const auto walk =
        discrete::lerw(g, center, boundary, rng::substream(seed, pi));
    // reverse: boundary -> center, then rotate the hitting side onto the
    // real axis so the path enters the upper half-plane
    std::vector<Complex> path;
    path.reserve(walk.size());
    const int end = walk.back();
    const int ex = end % (grid_n + 1), ey = end / (grid_n + 1);
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
      const int x = *it % (grid_n + 1), y = *it / (grid_n + 1);
      Complex z;
      if (ey == 0)
        z = {static_cast<double>(x - ex), static_cast<double>(y)};
      else if (ey == grid_n)
        z = {static_cast<double>(ex - x), static_cast<double>(grid_n - y)};
      else if (ex == 0)
        z = {static_cast<double>(y - ey), static_cast<double>(x)};
      else
        z = {static_cast<double>(ey - y), static_cast<double>(grid_n - x)};
      // keep the part where the half-plane approximation is reasonable
      if (std::abs(z) > grid_n / 3.0) break;
      path.push_back(z);
    }
    paths[pi] = std::move(path);
  });
  // drop paths that were cut too short
  std::vector<std::vector<Complex>> kept;
  for (auto& p : paths)
    if (p.size() >= 16) kept.push_back(std::move(p));
  auto est = driving_diffusivity(kept);
  return make_report("lerw_diffusivity", 2.0, est, 0.5, seed,
                     now_seconds() - t0);
}

std::vector<VerificationReport> default_suite(bool quick, std::uint64_t seed) {
  std::vector<VerificationReport> out;
  const std::size_t big = quick ? 400 : 10000;
  const int steps = quick ? 600 : 4000;
  out.push_back(verify_left_passage(4.0, Complex{1.0, 1.0}, big, steps,
                                    rng::substream(seed, 1)));
  out.push_back(verify_left_passage(6.0, Complex{-1.0, 1.0}, big, steps,
                                    rng::substream(seed, 2)));
  {
    const std::vector<int> sizes =
        quick ? std::vector<int>{32, 64} : std::vector<int>{64, 128, 256};
    const std::size_t ns = quick ? 2000 : 10000;
    out.push_back(verify_cardy(0.5, sizes, ns, rng::substream(seed, 3)));
    out.push_back(verify_cardy(0.3, sizes, ns, rng::substream(seed, 4)));
  }
  out.push_back(verify_restriction(2.0, 1.0, quick ? 300 : 5000,
                                   quick ? 800 : 4000, rng::substream(seed, 5)));
  {
    const std::vector<int> radii =
        quick ? std::vector<int>{16, 32} : std::vector<int>{16, 32, 64, 128};
    out.push_back(verify_arm_exponent(radii, quick ? 1000 : 10000,
                                      ArmGeometrySim::HalfPlane, 1,
                                      rng::substream(seed, 6)));
  }
  out.push_back(
      verify_box_dim_kappa6(quick ? 20000 : 100000, rng::substream(seed, 7)));
  out.push_back(verify_driver_roundtrip_diffusivity(
      2.0, quick ? 200 : 1500, quick ? 400 : 1000, rng::substream(seed, 8)));
  if (!quick)
    out.push_back(verify_lerw_diffusivity(200, 200, rng::substream(seed, 9)));
  return out;
}

}  // namespace sle::mc
