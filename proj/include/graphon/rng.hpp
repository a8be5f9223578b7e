#pragma once

#include <cstdint>
#include <random>

namespace graphon {

/// Seeded generator whose derived draws are identical on every platform.
///
/// The standard distributions are implementation-defined, so uniform reals
/// and bounded integers are produced here directly from the 64-bit engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for sample `index` of a run seeded with `seed`.
  static Rng derive(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace graphon
