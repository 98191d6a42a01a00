#pragma once

#include <cstdint>

namespace sle::rng {

// splitmix64 finalizer. Counter-based: stream k of seed s is mix64(s + k*GAMMA),
// so any sample index can be generated without touching shared state.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic sub-stream seed; hash(seed, index) in the usual sense.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

// Stateless counter generator: value k of the stream.
class Counter {
 public:
  explicit Counter(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t k) const {
    return mix64(seed_ + k * 0x9E3779B97F4A7C15ULL);
  }

  // uniform in [0,1), 53-bit resolution
  double uniform(std::uint64_t k) const {
    return static_cast<double>(bits(k) >> 11) * 0x1.0p-53;
  }

  // uniform in (0,1), safe as inverse-CDF argument
  double uniform_open(std::uint64_t k) const {
    return (static_cast<double>(bits(k) >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal(std::uint64_t k) const;

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t k, std::uint64_t n) const {
    // 128-bit multiply keeps the modulo bias at 2^-64
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(bits(k)) * n) >> 64);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Sequential convenience wrapper over Counter.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : ctr_(seed), k_(0) {}
  double uniform() { return ctr_.uniform(k_++); }
  double uniform_open() { return ctr_.uniform_open(k_++); }
  double normal() { return ctr_.normal(k_++); }
  std::uint64_t below(std::uint64_t n) { return ctr_.below(k_++, n); }
  bool coin() { return (ctr_.bits(k_++) >> 63) != 0; }

 private:
  Counter ctr_;
  std::uint64_t k_;
};

// Inverse of the standard normal CDF (Wichura's AS 241, PPND16).
// Accurate to ~1e-15 relative over the full open interval.
double inverse_normal_cdf(double p);

inline double Counter::normal(std::uint64_t k) const {
  return inverse_normal_cdf(uniform_open(k));
}

}  // namespace sle::rng
