#pragma once

#include <cstdint>
#include <random>

namespace mcim {

using Rng = std::mt19937_64;

// Recorded in run reports so that numbers can be tied to the generator that
// produced them.
inline constexpr const char* kRngAlgorithm = "mt19937_64+splitmix64-streams";

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Named substreams. Every stochastic phase draws from its own stream, so
// changing how much randomness one phase consumes never shifts any other
// phase, and per-item streams keep results independent of worker count.
enum class Stream : std::uint64_t {
  edge_probabilities = 1,
  activation_orders = 2,
  seed_selection = 3,
  tuples = 4,
  opt_lower_tuples = 5,
  trials = 6,
  evaluation = 7,
  frozen_activation = 8,
  collection = 9,
};

// Splitting rule: mix64(mix64(root ^ gold*stream) ^ gold*index).
constexpr std::uint64_t substream(std::uint64_t root, Stream s,
                                  std::uint64_t index = 0) noexcept {
  constexpr std::uint64_t gold = 0x9e3779b97f4a7c15ull;
  return mix64(mix64(root ^ (gold * static_cast<std::uint64_t>(s))) ^
               (gold * index));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Uniform double in [0, 1), 53-bit resolution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace mcim
