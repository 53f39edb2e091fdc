#pragma once

#include <cstdint>

namespace entroact::rng {

// SplitMix64 finalizer. All randomness in the project flows through keyed,
// counter-based streams built on this, so any value is a pure function of
// (seed, tags, counter) and independent of how work is partitioned across
// threads.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t combine(uint64_t a, uint64_t b) {
  return mix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2) + mix64(b)));
}

struct KeyedStream {
  uint64_t key = 0;

  uint64_t at(uint64_t counter) const { return mix64(key ^ mix64(counter)); }

  // Uniform in [0, bound) by fixed-point multiply; bias < 2^-32 for the
  // bounds used here (tiny alphabets).
  uint32_t bounded(uint64_t counter, uint32_t bound) const {
    const uint64_t r = at(counter);
    return static_cast<uint32_t>(
        (static_cast<unsigned __int128>(r) * bound) >> 64);
  }

  // Uniform double in [0, 1), 53 random bits.
  double unit(uint64_t counter) const {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
  }
};

inline KeyedStream stream(uint64_t seed, uint64_t tag, uint64_t subtag = 0) {
  return KeyedStream{combine(combine(seed, tag), subtag)};
}

// Fixed stream tags, one per sampling purpose.
namespace tags {
inline constexpr uint64_t kWordSampling = 0x776f7264u;   // word draws
inline constexpr uint64_t kSuffixSampling = 0x73756678u; // skew suffixes
inline constexpr uint64_t kWalk = 0x77616c6bu;           // random orbits
inline constexpr uint64_t kTest = 0x74657374u;           // test generators
}  // namespace tags

}  // namespace entroact::rng
