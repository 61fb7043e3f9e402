#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace psp {

using Rng = std::mt19937_64;

// Named sub-stream tags. Every random draw in the library flows from a user
// seed through mix_seed(seed, tag, indices...), so independent components
// never share a stream and per-index streams are stable under re-ordering.
namespace streams {
inline constexpr std::uint64_t kSample = 0x01;
inline constexpr std::uint64_t kTheta = 0x02;
inline constexpr std::uint64_t kSubsample = 0x03;
inline constexpr std::uint64_t kInit = 0x04;
inline constexpr std::uint64_t kWarmStart = 0x05;
inline constexpr std::uint64_t kEvalContext = 0x06;
inline constexpr std::uint64_t kMonteCarlo = 0x07;
inline constexpr std::uint64_t kHerding = 0x08;
inline constexpr std::uint64_t kSeqInit = 0x09;
inline constexpr std::uint64_t kBenchData = 0x0a;
inline constexpr std::uint64_t kBenchMethod = 0x0b;
inline constexpr std::uint64_t kBenchReference = 0x0c;
inline constexpr std::uint64_t kActiveSet = 0x0d;
}  // namespace streams

/// splitmix64 finalizer; the standard 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t x);

/// Collapses (seed, tag, indices...) into one well-mixed 64-bit seed.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

inline Rng make_rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                    std::uint64_t b = 0) {
  return Rng(mix_seed({seed, tag, a, b}));
}

}  // namespace psp
