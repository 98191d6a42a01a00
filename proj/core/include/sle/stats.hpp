#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace sle::mc {

struct Estimate {
  double mean = 0.0;
  double std_err = 0.0;  // sample std / sqrt(n)
  long n = 0;
};

// Welford accumulator; (mean, M2, n) triples merge pairwise.
class RunningStat {
 public:
  void push(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / n_;
    m2_ += d * (x - mean_);
  }

  void merge(const RunningStat& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double d = o.mean_ - mean_;
    const long n = n_ + o.n_;
    mean_ += d * o.n_ / n;
    m2_ += o.m2_ + d * d * (static_cast<double>(n_) * o.n_ / n);
    n_ = n;
  }

  long n() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  Estimate estimate() const;

 private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Deterministic Monte Carlo mean: sample i draws its own seed from
// (seed, i), samples are accumulated in fixed chunks of 1024 in index order
// and chunks are merged in order, so the result is identical for any worker
// count. The sampler may discard a sample by returning nullopt; discards are
// counted.
struct McResult {
  Estimate estimate;
  long discarded = 0;
};

McResult mc_mean(std::size_t n_samples, std::uint64_t seed,
                 const std::function<std::optional<double>(std::uint64_t)>& sample);

// Upper-tail p-value of the chi-square distribution with dof degrees of
// freedom (regularized incomplete gamma Q(dof/2, x/2)).
double chi_square_pvalue(double stat, int dof);

// Pearson statistic against expected counts.
double chi_square_stat(std::span<const long> counts,
                       std::span<const double> expected);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_err = 0.0;
};

// Ordinary least squares with residual-based slope error.
LineFit linear_fit(std::span<const double> x, std::span<const double> y);

// Weighted least squares (weights = 1/sigma^2).
LineFit weighted_linear_fit(std::span<const double> x,
                            std::span<const double> y,
                            std::span<const double> sigma);

}  // namespace sle::mc
