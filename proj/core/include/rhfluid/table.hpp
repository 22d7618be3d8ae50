#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "rhfluid/probe.hpp"

namespace rhfluid {

using Age = std::uint32_t;

enum class TableMode : std::uint8_t { InsertOnly, TombstoneDeletion, HardDeletion };

enum class CellKind : std::uint8_t { Empty, Live, Tombstone };

// Read-only view of one cell. Tombstones remember the deleted key's id and age.
struct CellView {
  CellKind kind = CellKind::Empty;
  KeyId key = 0;
  Age age = 0;
};

struct AgeChange {
  KeyId key = 0;
  Age from = 0;  // 1 for the freshly inserted key
  Age to = 0;
};

struct PlacementReport {
  std::uint64_t steps = 0;
  Age insertedAge = 0;
  // One entry per key whose cell changed, in the order they were settled.
  std::vector<AgeChange> finalAges;
};

struct SearchResult {
  bool found = false;
  std::uint64_t probes = 0;
};

/// Open-addressing table with Robin Hood collision resolution over random
/// probe sequences. Keys are opaque 64-bit ids; a key's age is the probe index
/// of the cell it occupies.
///
/// Not thread-safe; one instance per worker.
class RobinHoodTable {
 public:
  RobinHoodTable(TableMode mode, ProbeParams params, ProbeMode probeMode);

  PlacementReport insert(KeyId key);

  /// Insert without the duplicate check or the placement report. The caller
  /// guarantees the key is not live. Returns the number of probe steps.
  std::uint64_t insert_fresh(KeyId key);

  /// Remove a uniformly random live key. TombstoneDeletion leaves a tombstone
  /// with the key's age; HardDeletion empties the cell.
  KeyId delete_random(std::mt19937_64& rng);

  SearchResult search(KeyId key) const;

  /// Fraction of live keys of exactly each age.
  std::map<Age, double> age_histogram() const;

  /// Mean successful-search probe count over all live keys.
  double successful_search_cost() const;

  Age max_age() const noexcept { return maxAge_; }
  std::size_t size() const noexcept { return live_.size(); }
  std::uint64_t capacity() const noexcept { return params_.tableSize; }
  std::uint64_t step_count() const noexcept { return stepCount_; }
  TableMode mode() const noexcept { return mode_; }
  const ProbeParams& probe_params() const noexcept { return params_; }
  ProbeMode probe_mode() const noexcept { return probeMode_; }

  /// ageCounts[a] = number of live keys of age a (index 0 unused).
  std::span<const std::uint64_t> age_counts() const noexcept { return ageCounts_; }

  CellView cell(CellIndex index) const;

 private:
  struct Cell {
    KeyId key = 0;
    Age age = 0;
    std::uint32_t slot = 0;  // position in live_ when Live
    CellKind kind = CellKind::Empty;
  };

  std::uint64_t place(KeyId key, PlacementReport* report);
  void count_add(Age age);
  void count_remove(Age age);

  TableMode mode_;
  ProbeParams params_;
  ProbeMode probeMode_;
  std::vector<Cell> cells_;
  std::vector<CellIndex> live_;  // dense registry: cell index of each live key
  std::vector<std::uint64_t> ageCounts_;
  Age maxAge_ = 0;
  std::uint64_t stepCount_ = 0;
};

const char* to_string(TableMode mode) noexcept;
const char* to_string(ProbeMode mode) noexcept;

}  // namespace rhfluid
