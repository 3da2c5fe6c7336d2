#ifndef WQED_RNG_HPP
#define WQED_RNG_HPP

#include <cstdint>

namespace wqed {

// Counter-based deterministic RNG. Every draw is a pure function of
// (seed, stream, index), so layouts are reproducible across thread
// counts and platforms. The mixer is splitmix64's finalizer applied to
// a keyed counter; statistical quality is more than enough for
// positional/spectral sampling.
namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t keyed(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t index) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (0x517cc1b727220a95ULL + stream));
  h = mix64(h ^ (0x2545f4914f6cdd1dULL + index));
  return h;
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index) {
  return static_cast<double>(keyed(seed, stream, index) >> 11) * 0x1.0p-53;
}

// Stream tags keep independent draws (positions vs. detunings vs. sweeps)
// decorrelated for the same user-facing seed.
enum Stream : std::uint64_t {
  kBinPositions = 1,
  kExactPositions = 2,
  kExactDetunings = 3,
};

}  // namespace rng
}  // namespace wqed

#endif
