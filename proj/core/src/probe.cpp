#include "rhfluid/probe.hpp"

#include <bit>
#include <string>

#include "rhfluid/errors.hpp"
#include "rhfluid/seed.hpp"

namespace rhfluid {

namespace {

constexpr std::uint64_t kOffsetDomain = 0xD1B54A32D192ED03ULL;

std::uint64_t key_base(KeyId key, std::uint64_t seed) noexcept {
  return mix64(seed ^ mix64(key + kGolden));
}

}  // namespace

bool is_power_of_two(std::uint64_t n) noexcept { return std::has_single_bit(n); }

void validate(const ProbeParams& params, ProbeMode mode) {
  if (params.tableSize == 0) {
    throw InvalidArgument("probe: table size must be at least 1");
  }
  if (mode == ProbeMode::DoubleHashing && !is_power_of_two(params.tableSize)) {
    throw InvalidArgument("probe: double hashing needs a power-of-two table size, got " +
                          std::to_string(params.tableSize));
  }
}

DoubleHashPair derive_double_hash(KeyId key, const ProbeParams& params) {
  validate(params, ProbeMode::DoubleHashing);
  const std::uint64_t base = key_base(key, params.seed);
  const std::uint64_t n = params.tableSize;
  DoubleHashPair pair;
  pair.start = mix64(base) & (n - 1);
  // Odd offsets are units mod 2^k, so the first n probes visit every cell.
  pair.offset = (mix64(base ^ kOffsetDomain) | 1ULL) & (n - 1);
  if (n == 1) pair.offset = 1;
  return pair;
}

CellIndex double_hash_probe(const DoubleHashPair& pair, std::uint64_t j,
                            std::uint64_t n) {
  if (j == 0) throw InvalidArgument("probe: index j must be >= 1");
  if (n == 0) throw InvalidArgument("probe: table size must be at least 1");
  const auto a = static_cast<Uint128>(pair.start);
  const auto step = static_cast<Uint128>(j - 1) * pair.offset;
  return static_cast<CellIndex>((a + step) % n);
}

ProbeSequence::ProbeSequence(KeyId key, const ProbeParams& params, ProbeMode mode)
    : key_(key),
      n_(params.tableSize),
      base_(key_base(key, params.seed)),
      mode_(mode) {
  validate(params, mode);
  if (mode == ProbeMode::DoubleHashing) pair_ = derive_double_hash(key, params);
}

CellIndex ProbeSequence::random_at(std::uint64_t j) const noexcept {
  return reduce_range(mix64(base_ + j * kGolden), n_);
}

CellIndex ProbeSequence::at(std::uint64_t j) const {
  if (j == 0) throw InvalidArgument("probe: index j must be >= 1");
  return at_unchecked(j);
}

CellIndex probe_at(KeyId key, std::uint64_t j, const ProbeParams& params,
                   ProbeMode mode) {
  if (j == 0) throw InvalidArgument("probe: index j must be >= 1");
  return ProbeSequence(key, params, mode).at_unchecked(j);
}

}  // namespace rhfluid
