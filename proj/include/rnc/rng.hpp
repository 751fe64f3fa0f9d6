#pragma once

#include <cstdint>
#include <random>

namespace rnc {

/// Engine used for every draw in the library.
using Rng = std::mt19937_64;

/// Independent stream families derived from one master seed. Separating them
/// keeps, e.g., the initial-state draw from shifting path streams.
enum class StreamDomain : std::uint64_t {
  path = 1,
  initial_state = 2,
  expectation = 3,
  bootstrap = 4,
  battery = 5,
};

/// Stream derivation rule: a stream is a pure function of
/// (master_seed, domain, index), independent of scheduling.
struct RngPolicy {
  std::uint64_t master_seed = 0;

  Rng stream(StreamDomain domain, std::uint64_t index) const;
  Rng path_stream(std::uint64_t path_index) const { return stream(StreamDomain::path, path_index); }
};

/// splitmix64 finalizer; used as the fixed mixing function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). n must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

}  // namespace rnc
