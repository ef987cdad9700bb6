#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>

namespace reviewminer {

/// Seeded pseudo-random source whose output is identical across standard
/// library implementations: the engine is std::mt19937_64 (fully specified)
/// and every distribution is computed here rather than with std::*_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives a per-stage seed from the run seed, a stage name and grid
/// coordinates, e.g. derive_seed(42, "lda", {order, k}).
std::uint64_t derive_seed(std::uint64_t base, std::string_view stage,
                          std::initializer_list<std::uint64_t> coords = {});

}  // namespace reviewminer
