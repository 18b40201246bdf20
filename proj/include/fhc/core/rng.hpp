#ifndef FHC_CORE_RNG_HPP
#define FHC_CORE_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <utility>

namespace fhc {

// Deterministic 64-bit random stream: xoshiro256++ seeded through splitmix64.
// Uniform draws are pure integer arithmetic, so identical seeds produce
// identical sequences on every platform. Gaussians use the Box-Muller
// transform of two uniforms. The generator name is recorded in checkpoints
// and reports so runs can be reproduced.
class RandomStream {
 public:
  static constexpr const char* kAlgorithm = "xoshiro256++";

  explicit RandomStream(uint64_t seed);

  uint64_t next_u64();

  // Uniform in [0, 1) with 53 bits of precision.
  double next_uniform();

  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi);

  // Standard normal via z = sqrt(-2 ln u1) * cos(2 pi u2), u1 in (0, 1].
  double next_gaussian();

  // Fisher-Yates shuffle of [0, n) index permutations and containers.
  template <typename T>
  void shuffle(T& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(next_u64() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t state_[4];
  uint64_t seed_;
};

}  // namespace fhc

#endif
