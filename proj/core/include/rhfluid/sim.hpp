#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "rhfluid/probe.hpp"
#include "rhfluid/table.hpp"

namespace rhfluid {

struct SimConfig {
  std::uint64_t n = 65536;
  double alpha = 0.95;
  std::uint64_t trials = 1000;
  std::uint64_t masterSeed = 1;
  TableMode mode = TableMode::InsertOnly;
  ProbeMode probeMode = ProbeMode::FullyRandom;
  // Total insertions = max(ceil(alpha n), round(insertionFactor n)).
  // insertionFactor == alpha means fill only.
  double insertionFactor = 0.95;
  std::uint64_t searchSamples = 1024;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

void validate(const SimConfig& cfg);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1 divisor)

  friend bool operator==(const MeanStd&, const MeanStd&) = default;
};

struct SimStats {
  // Fraction of live keys with exactly this age.
  std::map<std::uint32_t, MeanStd> perAge;
  // Fraction of cells holding a live key of age >= i.
  std::map<std::uint32_t, MeanStd> tail;
  // Fraction of cells holding a tombstone of age >= i.
  std::map<std::uint32_t, MeanStd> tombstoneTail;
  MeanStd successfulCost;
  MeanStd unsuccessfulCost;
  std::map<std::uint32_t, std::uint64_t> maxAgeDistribution;
  std::uint64_t trialCount = 0;
  std::uint64_t liveKeys = 0;  // per trial
  std::uint64_t insertions = 0;  // per trial

  double mean_max_age() const;
  std::uint32_t max_max_age() const;

  friend bool operator==(const SimStats&, const SimStats&) = default;
};

/// Runs cfg.trials independent tables. Trial k is seeded with
/// derive_seed(masterSeed, k); results do not depend on thread count.
SimStats run_experiment(const SimConfig& cfg);

struct ScalingRow {
  std::uint64_t n = 0;
  double meanMaxAge = 0.0;
  std::uint32_t maxMaxAge = 0;
  std::map<std::uint32_t, std::uint64_t> maxAgeDistribution;
};

/// run_experiment at each size with everything else taken from base.
std::vector<ScalingRow> max_age_scaling(const SimConfig& base,
                                        const std::vector<std::uint64_t>& sizes);

/// Raw outcome of a single trial, exposed for tests.
struct TrialRecord {
  std::vector<std::uint64_t> ageCounts;   // [a] = live keys of age a
  std::vector<std::uint64_t> tombCounts;  // [a] = tombstones of age a
  std::uint64_t unsuccessfulProbes = 0;   // summed over searchSamples
  std::uint32_t maxAge = 0;
};

TrialRecord run_trial(const SimConfig& cfg, std::uint64_t trialIndex);

}  // namespace rhfluid
