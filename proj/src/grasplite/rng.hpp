#pragma once

#include <cstdint>
#include <random>

namespace grasplite {

// Derives independent, reproducible rng streams (env resets, exploration
// noise, replay sampling, ...) from one run seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(splitmix64(seed) ^ splitmix64(tag));
}

enum class Stream : std::uint64_t {
  net_init = 1,
  env = 2,
  noise = 3,
  replay = 4,
  eval = 5,
};

inline std::mt19937_64 make_stream(std::uint64_t seed, Stream stream) {
  return std::mt19937_64(mix_seed(seed, static_cast<std::uint64_t>(stream)));
}

// Fixed per-worker offset; workers of one run draw from disjoint seeds.
inline constexpr std::uint64_t kWorkerSeedStride = 7919;

inline std::uint64_t worker_seed(std::uint64_t run_seed, std::size_t rank) {
  return run_seed + kWorkerSeedStride * static_cast<std::uint64_t>(rank);
}

}  // namespace grasplite
