#pragma once

// Straight-line reimplementation of the placement, deletion and search rules
// used to cross-check RobinHoodTable on small tables. Deliberately naive:
// linear scans, no registries, no cached counters.

#include <cstdint>
#include <map>
#include <vector>

#include "rhfluid/probe.hpp"
#include "rhfluid/table.hpp"

namespace oracle {

struct Slot {
  enum Kind { Empty, Live, Tomb } kind = Empty;
  std::uint64_t key = 0;
  std::uint32_t age = 0;
};

class BruteTable {
 public:
  BruteTable(rhfluid::TableMode mode, rhfluid::ProbeParams params, rhfluid::ProbeMode probe)
      : mode_(mode), params_(params), probe_(probe), slots_(params.tableSize) {}

  std::uint64_t insert(std::uint64_t key) {
    std::uint64_t hand = key;
    std::uint32_t age = 1;
    std::uint64_t steps = 0;
    while (true) {
      const auto at = rhfluid::probe_at(hand, age, params_, probe_);
      Slot& c = slots_[at];
      ++steps;
      if (c.kind == Slot::Empty ||
          (c.kind == Slot::Tomb && mode_ == rhfluid::TableMode::TombstoneDeletion &&
           c.age <= age)) {
        c = Slot{Slot::Live, hand, age};
        return steps;
      }
      if (c.kind == Slot::Live && c.age < age) {
        const Slot old = c;
        c = Slot{Slot::Live, hand, age};
        hand = old.key;
        age = old.age + 1;
        continue;
      }
      age = age + 1;
    }
  }

  void erase(std::uint64_t key) {
    for (auto& c : slots_) {
      if (c.kind == Slot::Live && c.key == key) {
        if (mode_ == rhfluid::TableMode::TombstoneDeletion) {
          c.kind = Slot::Tomb;
        } else {
          c = Slot{};
        }
        return;
      }
    }
  }

  std::uint32_t max_age() const {
    std::uint32_t m = 0;
    for (const auto& c : slots_) {
      if (c.kind == Slot::Live && c.age > m) m = c.age;
    }
    return m;
  }

  // Returns whether the key is live; probes counts cells examined.
  bool search(std::uint64_t key, std::uint64_t& probes) const {
    const std::uint32_t limit = max_age();
    probes = 0;
    for (std::uint32_t j = 1; j <= limit; ++j) {
      const Slot& c = slots_[rhfluid::probe_at(key, j, params_, probe_)];
      ++probes;
      if (c.kind == Slot::Live && c.key == key) return true;
      if (mode_ == rhfluid::TableMode::HardDeletion) continue;
      if (c.kind == Slot::Empty) return false;
      if (c.age < j) return false;
    }
    return false;
  }

  std::map<std::uint32_t, std::uint64_t> age_counts() const {
    std::map<std::uint32_t, std::uint64_t> out;
    for (const auto& c : slots_) {
      if (c.kind == Slot::Live) ++out[c.age];
    }
    return out;
  }

  const std::vector<Slot>& slots() const { return slots_; }

 private:
  rhfluid::TableMode mode_;
  rhfluid::ProbeParams params_;
  rhfluid::ProbeMode probe_;
  std::vector<Slot> slots_;
};

}  // namespace oracle
