#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace treewalk {

/// Purpose tags keep the streams for different random objects apart even
/// when they share a master seed and realization index.
enum class Stream : std::uint32_t { Disorder = 1, Gluing = 2, Test = 99 };

/// Deterministic random stream keyed by (master seed, realization, purpose).
///
/// Every realization owns its own stream, so results never depend on the
/// order in which workers pick up realizations. Output is a pure function of
/// the key: std::seed_seq and mt19937_64 are fully specified by the standard,
/// and the real/integer conversions below avoid the library-defined
/// distributions.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t realization, Stream purpose) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(realization),
                      static_cast<std::uint32_t>(realization >> 32),
                      static_cast<std::uint32_t>(purpose)};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Fisher-Yates shuffle of 0..n-1.
  std::vector<std::int64_t> permutation(std::int64_t n) {
    std::vector<std::int64_t> p(n);
    for (std::int64_t i = 0; i < n; ++i) p[i] = i;
    for (std::int64_t i = n - 1; i > 0; --i)
      std::swap(p[i], p[below(static_cast<std::uint64_t>(i) + 1)]);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace treewalk
