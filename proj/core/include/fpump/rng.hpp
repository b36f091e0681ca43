#pragma once

#include <cstdint>
#include <random>

namespace fpump {

/// Seeded mt19937_64 with integer and real draws defined here (not by the
/// standard distributions, whose output differs between library vendors),
/// so a seed reproduces the same stream on every platform.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer over (base, index); used to derive per-run seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace fpump
