#pragma once

#include <cstdint>
#include <random>

namespace dbsr {

// Named sub-streams forked from one run seed. Each consumer draws from its
// own stream so that enabling one feature never shifts another's draws.
enum class Stream : std::uint64_t {
  Deployment = 0x6465706c6f79ULL,
  Protocol = 0x70726f746fULL,
  Genetic = 0x67656e6574ULL,
};

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded 64-bit Mersenne Twister with platform-independent helpers.
///
/// The standard distributions are implementation-defined, so uniform draws are
/// derived here directly from the engine output to keep runs reproducible
/// across standard libraries.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng fork(std::uint64_t seed, Stream stream) {
    return Rng(mix64(seed ^ mix64(static_cast<std::uint64_t>(stream))));
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi], rejection sampled (no modulo bias).
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == ~std::uint64_t{0}) return engine_();
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return lo + v % range;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dbsr
