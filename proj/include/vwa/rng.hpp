#pragma once

#include <cstdint>

#include "vwa/normal.hpp"

namespace vwa {

// Seed for a named substream. Identical (master, stream) pairs always
// reproduce the identical draw sequence, independent of thread count,
// so parallel and serial simulation runs match bit for bit.
struct RngSeed {
  std::uint64_t master = 0x9e3779b97f4a7c15ull;
  std::uint64_t stream = 0;
};

namespace detail {

// splitmix64 finalizer; full-period bijective mixer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix2(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Collapses a parent seed into a fresh master so that replicate b of an
// operation can run on its own stream b: substream(seed, b) visits a
// generator unrelated to substream(seed, b') for b != b'.
inline RngSeed substream(const RngSeed& parent, std::uint64_t child) {
  return RngSeed{detail::mix2(parent.master, parent.stream), child};
}

// xoshiro256++ with splitmix64 state expansion.
class Rng {
 public:
  explicit Rng(const RngSeed& seed) {
    std::uint64_t sm = detail::mix2(seed.master, detail::mix64(seed.stream));
    for (auto& word : s_) {
      sm += 0x9e3779b97f4a7c15ull;
      word = detail::mix64(sm);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = detail::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1): offset-by-half grid of 2^-53.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n) by 128-bit multiply-shift.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Standard normal via the inverse CDF, so draws are reproducible to the
  // bit wherever IEEE doubles are.
  double normal() { return normal_quantile(uniform01()); }

 private:
  std::uint64_t s_[4];
};

}  // namespace vwa
