#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace setmax {

/// splitmix64 step; used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic seed derivation: folds up to three salts into a master seed.
/// Every stochastic component draws from its own stream derived this way, so
/// results do not depend on scheduling or worker count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master;
  splitmix64_next(s);
  s ^= 0x517cc1b727220a95ULL * (a + 1);
  splitmix64_next(s);
  s ^= 0x2545f4914f6cdd1dULL * (b + 1);
  splitmix64_next(s);
  s ^= 0x9e3779b97f4a7c15ULL * (c + 1);
  return splitmix64_next(s);
}

/// mt19937_64 with hand-rolled draw helpers. The engine's integer output is
/// pinned by the standard; std::* distributions are not, so bounded ints,
/// unit reals and normals are implemented here to keep runs bit-reproducible
/// across toolchains.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound); rejection-sampled, bias-free.
  int next_int(int bound) {
    if (bound <= 0) throw std::invalid_argument("SplitRng bound must be positive");
    const std::uint64_t b = static_cast<std::uint64_t>(bound);
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % b;
    std::uint64_t r = next_u64();
    while (r >= limit) r = next_u64();
    return static_cast<int>(r % b);
  }

  bool next_bool() { return (next_u64() & 1ULL) != 0; }

  /// Box-Muller; caches the spare deviate.
  double next_normal(double mean, double stddev) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mean + stddev * r * std::cos(theta);
  }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  SplitRng child(std::uint64_t salt) { return SplitRng(derive_seed(next_u64(), salt)); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace setmax
