#include "reviewminer/rng.hpp"

#include <limits>

namespace reviewminer {

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection on the biased low range keeps the draw exactly uniform.
  const std::uint64_t threshold = (std::numeric_limits<std::uint64_t>::max() - bound + 1) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view stage,
                          std::initializer_list<std::uint64_t> coords) {
  // FNV-1a over the stage name, then fold everything through SplitMix64.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : stage) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t seed = mix64(base ^ mix64(h));
  for (const auto c : coords) seed = mix64(seed ^ mix64(c + 0x632be59bd9b4e019ULL));
  return seed;
}

}  // namespace reviewminer
