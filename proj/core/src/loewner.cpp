#include "sle/loewner.hpp"

#include <cmath>

#include "sle/parallel.hpp"
#include "sle/rng.hpp"

namespace sle::loewner {

using conformal::SlitStep;

void Driver::validate() const {
  if (times.size() != values.size() || times.size() < 1)
    throw std::invalid_argument("Driver: times/values size mismatch");
  if (times.front() != 0.0)
    throw std::invalid_argument("Driver: times must start at 0");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      throw std::invalid_argument("Driver: times must be strictly increasing");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("Driver: values must be finite");
}

Driver sample_driver(double kappa, double horizon, int n_steps,
                     std::uint64_t seed) {
  if (!(horizon > 0.0)) throw std::domain_error("sample_driver: horizon <= 0");
  if (n_steps < 1) throw std::domain_error("sample_driver: n_steps < 1");
  std::vector<double> times(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k)
    times[k] = horizon * static_cast<double>(k) / n_steps;
  return sample_driver_on_grid(kappa, std::move(times), seed);
}

Driver sample_driver_on_grid(double kappa, std::vector<double> times,
                             std::uint64_t seed) {
  if (kappa < 0.0) throw std::domain_error("sample_driver: kappa < 0");
  Driver d;
  d.times = std::move(times);
  d.values.resize(d.times.size(), 0.0);
  d.kappa_hint = kappa;
  d.validate();
  const rng::Counter ctr(seed);
  const double sk = std::sqrt(kappa);
  double u = 0.0;
  for (std::size_t k = 1; k < d.times.size(); ++k) {
    const double dt = d.times[k] - d.times[k - 1];
    u += sk * std::sqrt(dt) * ctr.normal(k - 1);
    d.values[k] = u;
  }
  return d;
}

std::vector<SlitStep> driver_steps(const Driver& d) {
  std::vector<SlitStep> steps(d.size() - 1);
  for (std::size_t k = 0; k + 1 < d.size(); ++k)
    steps[k] = {d.values[k], 2.0 * (d.times[k + 1] - d.times[k])};
  return steps;
}

SwallowResult evolve_point(const Driver& d, Complex z, double min_im) {
  d.validate();
  const bool interior = z.imag() > 0.0;
  if (!interior && z.real() == d.values.front())
    throw std::domain_error("evolve_point: z equals the starting point");
  if (z.imag() < 0.0)
    throw std::domain_error("evolve_point: z below the real axis");

  Complex w = z;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    const double u = d.values[k];
    const double dt = d.times[k + 1] - d.times[k];
    const Complex diff = w - u;
    if (std::abs(diff) <= min_im)
      return {true, d.times[k], w};
    if (interior && w.imag() <= min_im) {
      // Height has collapsed below resolution; the point is glued to the
      // hull boundary and gets absorbed where it stands.
      return {true, d.times[k], w};
    }
    if (std::fabs(diff.real()) <= min_im && diff.imag() > 0.0 &&
        diff.imag() * diff.imag() <= 4.0 * dt) {
      // exactly above the driver: swallowed mid-step at dcap = Im^2 / 2
      return {true, d.times[k] + diff.imag() * diff.imag() / 4.0, w};
    }
    if (!interior) {
      // real point: exact real evolution, absorbed if the driver crosses it
      const double x = diff.real();
      const double mag = std::sqrt(x * x + 4.0 * dt);
      w = Complex{u + (x >= 0.0 ? mag : -mag), 0.0};
      if (k + 2 < d.size()) {
        const double xn = w.real() - d.values[k + 1];
        if (x >= 0.0 ? xn <= min_im : xn >= -min_im)
          return {true, d.times[k + 1], w};
      }
      continue;
    }
    w = conformal::slit_forward(w, {u, 2.0 * dt});
  }
  return {false, std::numeric_limits<double>::infinity(), w};
}

Trace chordal_trace(const Driver& d, double tip_eps) {
  d.validate();
  if (tip_eps < 0.0) throw std::domain_error("chordal_trace: tip_eps < 0");
  const std::size_t n = d.size();
  Trace tr;
  tr.flavor = TraceFlavor::Chordal;
  tr.times = d.times;
  tr.points.assign(n, Complex{0.0, 0.0});
  tr.points[0] = Complex{d.values[0], 0.0};

  const auto steps = driver_steps(d);
  par::parallel_for(n - 1, [&](std::size_t i) {
    const std::size_t k = i + 1;  // trace index
    // tip of step k-1, then unwind earlier steps
    Complex w{steps[k - 1].u, tip_eps};
    w = conformal::slit_inverse(w, steps[k - 1]);
    for (std::size_t j = k - 1; j-- > 0;)
      w = conformal::slit_inverse(w, steps[j]);
    tr.points[k] = w;
  });
  return tr;
}

Driver extract_driving(std::span<const Complex> path,
                       double max_step_cap_fraction) {
  if (path.size() < 2)
    throw std::invalid_argument("extract_driving: need at least 2 points");
  if (std::fabs(path[0].imag()) > 1e-12)
    throw std::domain_error("extract_driving: path must start on the real axis");

  std::vector<Complex> pts(path.begin(), path.end());
  double radius = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].imag() < -1e-12) {
      if (i == 0) throw std::domain_error("extract_driving: path leaves H");
      throw UnzipFailure(i);
    }
    radius = std::max(radius, std::abs(pts[i]));
  }
  // a1 <= R^2 bounds the total capacity; cap per-step capacity by a fraction.
  const double cap_limit =
      std::max(max_step_cap_fraction * radius * radius, 1e-300);

  Driver out;
  out.times.push_back(0.0);
  out.values.push_back(pts[0].real());

  double total_cap = 0.0;
  double prev_u = pts[0].real();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    // zip down point i; subdivide while its slit carries too much capacity
    while (true) {
      Complex p = pts[i];
      if (p.imag() < -1e-9) throw UnzipFailure(i);
      if (p.imag() < 0.0) p = {p.real(), 0.0};
      double dcap = 0.5 * p.imag() * p.imag();
      bool subdivided = false;
      if (dcap > cap_limit) {
        // midpoint between the previous tip image (at prev_u on R) and p
        p = 0.5 * (Complex{prev_u, 0.0} + p);
        dcap = 0.5 * p.imag() * p.imag();
        subdivided = true;
      }
      const SlitStep step{p.real(), dcap};
      total_cap += dcap;
      out.times.push_back(0.5 * total_cap);
      out.values.push_back(step.u);
      prev_u = step.u;
      for (std::size_t j = i; j < pts.size(); ++j)
        pts[j] = conformal::slit_forward(pts[j], step);
      if (!subdivided) break;
    }
    // point i now sits on the real axis (within round-off)
  }
  // Degenerate zero-capacity steps can produce equal times; drop them.
  Driver clean;
  clean.times.push_back(out.times[0]);
  clean.values.push_back(out.values[0]);
  for (std::size_t k = 1; k < out.times.size(); ++k) {
    if (out.times[k] > clean.times.back()) {
      clean.times.push_back(out.times[k]);
      clean.values.push_back(out.values[k]);
    } else {
      clean.values.back() = out.values[k];
    }
  }
  return clean;
}

Driver extract_driving(const Trace& path, double max_step_cap_fraction) {
  return extract_driving(std::span<const Complex>(path.points),
                         max_step_cap_fraction);
}

namespace {

// Right-hand side of the radial Loewner equation dg/dt = g (W+g)/(W-g).
Complex radial_rhs(Complex w, Complex g) {
  return g * (w + g) / (w - g);
}

}  // namespace

Trace radial_trace(double kappa, double horizon, int n_steps,
                   std::uint64_t seed) {
  if (kappa < 0.0) throw std::domain_error("radial_trace: kappa < 0");
  const Driver d = sample_driver(kappa, horizon, n_steps, seed);
  const auto W = [&](double t) {
    // piecewise-constant (left endpoint) driver on the uniform grid
    const std::size_t n = d.size();
    if (t <= 0.0) return std::polar(1.0, d.values[0]);
    const double h = d.horizon();
    std::size_t k = static_cast<std::size_t>((t / h) * (n - 1));
    if (k >= n - 1) k = n - 2;
    if (t < d.times[k] && k > 0) --k;
    while (k + 2 < n && t >= d.times[k + 1]) ++k;
    return std::polar(1.0, d.values[k]);
  };

  Trace tr;
  tr.flavor = TraceFlavor::Radial;
  tr.times = d.times;
  tr.points.assign(d.size(), Complex{1.0, 0.0});

  par::parallel_for(d.size() - 1, [&](std::size_t i) {
    const std::size_t k = i + 1;
    const double t0 = d.times[k];
    // Reversed flow in sigma with t = t0 - sigma^2:
    //   dh/dsigma = -2 sigma h (W+h)/(W-h),  h(0) = tip driver position.
    // The sigma substitution removes the square-root singularity at the tip
    // (h ~ W(1 - 2 sigma) there), and the first step is seeded from that
    // expansion. The tip belongs to the last applied step, driver values[k-1].
    const Complex w0 = std::polar(1.0, d.values[k - 1]);
    const int m = std::max<int>(64, static_cast<int>(4 * k));
    const double smax = std::sqrt(t0);
    const double hs = smax / m;
    Complex h = w0 * (1.0 - 2.0 * hs + 2.0 * hs * hs);
    const auto f = [&](double sig, Complex hh) -> Complex {
      return -2.0 * sig * radial_rhs(W(t0 - sig * sig), hh);
    };
    for (int j = 1; j < m; ++j) {
      const double s = j * hs;
      const Complex k1 = f(s, h);
      const Complex k2 = f(s + 0.5 * hs, h + 0.5 * hs * k1);
      const Complex k3 = f(s + 0.5 * hs, h + 0.5 * hs * k2);
      const Complex k4 = f(s + hs, h + hs * k3);
      h += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (std::abs(h) > 1.0) h /= std::abs(h);  // RK overshoot guard
    }
    tr.points[k] = h;
  });
  return tr;
}

Complex radial_evolve_point(const Driver& d, Complex z, int substeps_per_step) {
  d.validate();
  if (std::abs(z) >= 1.0)
    throw std::domain_error("radial_evolve_point: |z| must be < 1");
  Complex g = z;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    const Complex w = std::polar(1.0, d.values[k]);
    const double dt = (d.times[k + 1] - d.times[k]) / substeps_per_step;
    for (int j = 0; j < substeps_per_step; ++j) {
      const Complex k1 = radial_rhs(w, g);
      const Complex k2 = radial_rhs(w, g + 0.5 * dt * k1);
      const Complex k3 = radial_rhs(w, g + 0.5 * dt * k2);
      const Complex k4 = radial_rhs(w, g + dt * k3);
      g += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return g;
}

}  // namespace sle::loewner
