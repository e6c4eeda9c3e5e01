#pragma once

#include <cstdint>
#include <random>

namespace umax {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Work-unit streams derive their seeds from (master, stream, index) so that
// parallel execution order cannot change any random draw.
enum class Stream : std::uint64_t {
  Replicate = 1,
  Tail = 2,
  Tau = 3,
  Probe = 4,
  BoundTrial = 5,
};

inline std::uint64_t mix_seed(std::uint64_t master, Stream stream, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64_next(s);
  s = h ^ (static_cast<std::uint64_t>(stream) * 0xD6E8FEB86659FD93ull);
  h = splitmix64_next(s);
  s = h ^ (index * 0xCA5A826395121157ull);
  return splitmix64_next(s);
}

// mt19937_64 with an explicit [0,1) double conversion; both are fully
// specified, so streams are reproducible across platforms and compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace umax
