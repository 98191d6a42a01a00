#include "sle/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "sle/parallel.hpp"
#include "sle/rng.hpp"

namespace sle::mc {

Estimate RunningStat::estimate() const {
  Estimate e;
  e.n = n_;
  e.mean = mean_;
  e.std_err = n_ > 1 ? std::sqrt(m2_ / (n_ - 1.0) / n_) : 0.0;
  return e;
}

McResult mc_mean(std::size_t n_samples, std::uint64_t seed,
                 const std::function<std::optional<double>(std::uint64_t)>& sample) {
  constexpr std::size_t kChunk = 1024;
  const std::size_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<RunningStat> chunk_stats(n_chunks);
  std::vector<long> chunk_discards(n_chunks, 0);

  par::parallel_for(n_chunks, [&](std::size_t ci) {
    RunningStat st;
    long discards = 0;
    const std::size_t lo = ci * kChunk;
    const std::size_t hi = std::min(n_samples, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto v = sample(rng::substream(seed, i));
      if (v)
        st.push(*v);
      else
        ++discards;
    }
    chunk_stats[ci] = st;
    chunk_discards[ci] = discards;
  });

  McResult out;
  RunningStat total;
  for (std::size_t ci = 0; ci < n_chunks; ++ci) {
    total.merge(chunk_stats[ci]);
    out.discarded += chunk_discards[ci];
  }
  out.estimate = total.estimate();
  return out;
}

namespace {

// Regularized incomplete gamma functions, series + continued fraction
// (cf. Numerical Recipes gammp/gammq).
double gamma_p_series(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chi_square_pvalue(double stat, int dof) {
  if (dof < 1) throw std::domain_error("chi_square_pvalue: dof < 1");
  if (stat <= 0.0) return 1.0;
  const double a = 0.5 * dof, x = 0.5 * stat;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_stat(std::span<const long> counts,
                       std::span<const double> expected) {
  if (counts.size() != expected.size())
    throw std::invalid_argument("chi_square_stat: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (expected[i] <= 0.0)
      throw std::domain_error("chi_square_stat: non-positive expected count");
    const double d = counts[i] - expected[i];
    s += d * d / expected[i];
  }
  return s;
}

LineFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("linear_fit: bad input");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (f.intercept + f.slope * x[i]);
      ss += r * r;
    }
    f.slope_err = std::sqrt(ss / (n - 2.0) / sxx);
  }
  return f;
}

LineFit weighted_linear_fit(std::span<const double> x,
                            std::span<const double> y,
                            std::span<const double> sigma) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n || sigma.size() != n)
    throw std::invalid_argument("weighted_linear_fit: bad input");
  double sw = 0, swx = 0, swy = 0;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 1.0 / (sigma[i] * sigma[i]);
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double mx = swx / sw, my = swy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.slope_err = std::sqrt(1.0 / sxx);
  return f;
}

}  // namespace sle::mc
