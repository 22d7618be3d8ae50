#pragma once

#include <cstdint>

namespace rhfluid {

__extension__ typedef unsigned __int128 Uint128;
__extension__ typedef __int128 Int128;

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer: a bijective avalanche mix of 64 bits.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Derive an independent child seed from (parent, index). Used for per-trial
// and per-purpose streams so that no stream depends on draw order.
constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(parent + kGolden) ^ mix64(index * kGolden + 0x632BE59BD9B4E019ULL));
}

// Map 64 random bits onto [0, bound) by multiply-high.
inline std::uint64_t reduce_range(std::uint64_t bits, std::uint64_t bound) noexcept {
  return static_cast<std::uint64_t>(
      (static_cast<Uint128>(bits) * bound) >> 64);
}

}  // namespace rhfluid
