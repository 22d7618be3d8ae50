#pragma once

#include <cstdint>

namespace rhfluid {

using KeyId = std::uint64_t;
using CellIndex = std::uint64_t;

enum class ProbeMode : std::uint8_t { FullyRandom, DoubleHashing };

struct ProbeParams {
  std::uint64_t seed = 0;
  std::uint64_t tableSize = 0;
};

// Throws InvalidArgument if tableSize is 0, or if mode is DoubleHashing and
// tableSize is not a power of two.
void validate(const ProbeParams& params, ProbeMode mode);

bool is_power_of_two(std::uint64_t n) noexcept;

// Start/offset pair of a double-hashing sequence. offset is odd.
struct DoubleHashPair {
  std::uint64_t start = 0;
  std::uint64_t offset = 1;
};

DoubleHashPair derive_double_hash(KeyId key, const ProbeParams& params);

// (start + (j - 1) * offset) mod n, for j >= 1.
CellIndex double_hash_probe(const DoubleHashPair& pair, std::uint64_t j,
                            std::uint64_t n);

/// The conceptually infinite probe sequence of one key. Positions are computed
/// on demand from (seed, key, j), so a sequence costs O(1) memory and replays
/// identically in any process.
class ProbeSequence {
 public:
  ProbeSequence(KeyId key, const ProbeParams& params, ProbeMode mode);

  /// Cell examined at probe index j (1-based). Throws InvalidArgument on j = 0.
  CellIndex at(std::uint64_t j) const;

  KeyId key() const noexcept { return key_; }

  // Unchecked variant for hot loops; j must be >= 1.
  CellIndex at_unchecked(std::uint64_t j) const noexcept {
    if (mode_ == ProbeMode::DoubleHashing) {
      return (pair_.start + (j - 1) * pair_.offset) & (n_ - 1);
    }
    return random_at(j);
  }

 private:
  CellIndex random_at(std::uint64_t j) const noexcept;

  KeyId key_;
  std::uint64_t n_;
  std::uint64_t base_;
  DoubleHashPair pair_;
  ProbeMode mode_;
};

/// Cell index for the j-th probe of key. Pure function of its arguments.
CellIndex probe_at(KeyId key, std::uint64_t j, const ProbeParams& params,
                   ProbeMode mode);

}  // namespace rhfluid
