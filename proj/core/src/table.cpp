#include "rhfluid/table.hpp"

#include <string>

#include "rhfluid/errors.hpp"
#include "rhfluid/seed.hpp"

namespace rhfluid {

const char* to_string(TableMode mode) noexcept {
  switch (mode) {
    case TableMode::InsertOnly: return "insert-only";
    case TableMode::TombstoneDeletion: return "tombstone";
    case TableMode::HardDeletion: return "no-tombstone";
  }
  return "?";
}

const char* to_string(ProbeMode mode) noexcept {
  return mode == ProbeMode::FullyRandom ? "random" : "double";
}

RobinHoodTable::RobinHoodTable(TableMode mode, ProbeParams params, ProbeMode probeMode)
    : mode_(mode), params_(params), probeMode_(probeMode) {
  validate(params_, probeMode_);
  if (params_.tableSize > UINT32_MAX) {
    throw InvalidArgument("table: size must fit in 32 bits");
  }
  cells_.resize(params_.tableSize);
  ageCounts_.assign(2, 0);
}

void RobinHoodTable::count_add(Age age) {
  if (age >= ageCounts_.size()) ageCounts_.resize(static_cast<std::size_t>(age) * 2, 0);
  ++ageCounts_[age];
  if (age > maxAge_) maxAge_ = age;
}

void RobinHoodTable::count_remove(Age age) {
  --ageCounts_[age];
  while (maxAge_ > 0 && ageCounts_[maxAge_] == 0) --maxAge_;
}

PlacementReport RobinHoodTable::insert(KeyId key) {
  if (live_.size() >= params_.tableSize) {
    throw TableFull("table: cannot insert into a full table");
  }
  if (search(key).found) {
    throw PreconditionViolation("table: key " + std::to_string(key) + " is already live");
  }
  PlacementReport report;
  report.steps = place(key, &report);
  for (const auto& change : report.finalAges) {
    if (change.key == key) report.insertedAge = change.to;
  }
  return report;
}

std::uint64_t RobinHoodTable::insert_fresh(KeyId key) {
  if (live_.size() >= params_.tableSize) {
    throw TableFull("table: cannot insert into a full table");
  }
  return place(key, nullptr);
}

std::uint64_t RobinHoodTable::place(KeyId key, PlacementReport* report) {
  struct Hand {
    KeyId key;
    Age age;
    Age pickedUpAt;
    std::uint32_t slot;
  };

  std::uint64_t steps = 0;
  Hand hand{key, 1, 1, static_cast<std::uint32_t>(live_.size())};
  live_.push_back(0);
  ProbeSequence seq(key, params_, probeMode_);

  auto settle = [&](CellIndex at) {
    Cell& cell = cells_[at];
    cell = Cell{hand.key, hand.age, hand.slot, CellKind::Live};
    live_[hand.slot] = at;
    count_add(hand.age);
    if (report) report->finalAges.push_back({hand.key, hand.pickedUpAt, hand.age});
  };

  for (;;) {
    const CellIndex at = seq.at_unchecked(hand.age);
    ++steps;
    Cell& cell = cells_[at];

    if (cell.kind == CellKind::Empty) {
      settle(at);
      break;
    }
    if (cell.kind == CellKind::Tombstone) {
      if (cell.age <= hand.age) {
        settle(at);
        break;
      }
      ++hand.age;
      continue;
    }
    if (cell.age < hand.age) {
      // The younger resident yields the cell and continues from its next probe.
      const Hand displaced{cell.key, cell.age + 1, cell.age, cell.slot};
      count_remove(cell.age);
      settle(at);
      hand = displaced;
      seq = ProbeSequence(hand.key, params_, probeMode_);
      continue;
    }
    ++hand.age;
  }

  stepCount_ += steps;
  return steps;
}

KeyId RobinHoodTable::delete_random(std::mt19937_64& rng) {
  if (mode_ == TableMode::InsertOnly) {
    throw UnsupportedOperation("table: deletion is not available in insert-only mode");
  }
  if (live_.empty()) throw EmptyTable("table: cannot delete from an empty table");

  const auto index = static_cast<std::uint32_t>(reduce_range(rng(), live_.size()));
  const CellIndex at = live_[index];
  Cell& cell = cells_[at];
  const KeyId key = cell.key;

  const CellIndex last = live_.back();
  live_[index] = last;
  cells_[last].slot = index;
  live_.pop_back();

  count_remove(cell.age);
  if (mode_ == TableMode::TombstoneDeletion) {
    cell.kind = CellKind::Tombstone;
  } else {
    cell = Cell{};
  }
  return key;
}

SearchResult RobinHoodTable::search(KeyId key) const {
  const ProbeSequence seq(key, params_, probeMode_);
  for (std::uint64_t j = 1;; ++j) {
    if (j > maxAge_) return {false, j - 1};
    const Cell& cell = cells_[seq.at_unchecked(j)];
    if (cell.kind == CellKind::Live && cell.key == key) return {true, j};
    if (mode_ == TableMode::HardDeletion) continue;
    if (cell.kind == CellKind::Empty || cell.age < j) return {false, j};
  }
}

std::map<Age, double> RobinHoodTable::age_histogram() const {
  if (live_.empty()) throw EmptyTable("table: age histogram of an empty table");
  std::map<Age, double> histogram;
  const auto total = static_cast<double>(live_.size());
  for (Age age = 1; age <= maxAge_; ++age) {
    if (ageCounts_[age] > 0) histogram[age] = static_cast<double>(ageCounts_[age]) / total;
  }
  return histogram;
}

double RobinHoodTable::successful_search_cost() const {
  if (live_.empty()) throw EmptyTable("table: search cost of an empty table");
  std::uint64_t probes = 0;
  for (Age age = 1; age <= maxAge_; ++age) probes += age * ageCounts_[age];
  return static_cast<double>(probes) / static_cast<double>(live_.size());
}

CellView RobinHoodTable::cell(CellIndex index) const {
  if (index >= cells_.size()) throw InvalidArgument("table: cell index out of range");
  const Cell& c = cells_[index];
  if (c.kind == CellKind::Empty) return {};
  return {c.kind, c.key, c.age};
}

}  // namespace rhfluid
