#pragma once

#include <cstdint>
#include <random>

namespace gaussclone {

// Deterministic seeded stream; the library never reads ambient entropy.
// normal() runs Box-Muller on explicit 53-bit uniforms so that sequences are
// bit-identical across platforms and standard library implementations
// (std::normal_distribution makes no such promise).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal();

  // SplitMix64 mix of (master, index); used to derive independent per-point
  // seeds for parallel grids so results don't depend on the thread count.
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gaussclone
