#include "rhfluid/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "rhfluid/errors.hpp"
#include "rhfluid/seed.hpp"

namespace rhfluid {

namespace {

std::uint64_t fill_count(const SimConfig& cfg) {
  return static_cast<std::uint64_t>(
      std::ceil(cfg.alpha * static_cast<double>(cfg.n) - 1e-9));
}

std::uint64_t total_insertions(const SimConfig& cfg) {
  const auto requested =
      static_cast<std::uint64_t>(std::llround(cfg.insertionFactor * static_cast<double>(cfg.n)));
  return std::max(fill_count(cfg), requested);
}

using Wide = Int128;

// Sample mean and standard deviation of x_k / scale from integer sums.
MeanStd from_sums(Wide sum, Wide sumSq, std::uint64_t trials, double scale) {
  MeanStd out;
  const auto t = static_cast<double>(trials);
  out.mean = static_cast<double>(sum) / (t * scale);
  if (trials > 1) {
    const Wide spread = static_cast<Wide>(trials) * sumSq - sum * sum;
    const double var = static_cast<double>(spread) / (t * (t - 1.0) * scale * scale);
    out.stddev = std::sqrt(std::max(0.0, var));
  }
  return out;
}

struct Accumulator {
  Wide sum = 0;
  Wide sumSq = 0;
  void add(std::uint64_t x) {
    sum += x;
    sumSq += static_cast<Wide>(x) * x;
  }
};

}  // namespace

void validate(const SimConfig& cfg) {
  if (cfg.n < 2 || cfg.n > UINT32_MAX) {
    throw InvalidArgument("SimConfig: n must lie in [2, 2^32)");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw InvalidArgument("SimConfig: alpha must lie in (0, 1)");
  }
  if (cfg.trials < 1) throw InvalidArgument("SimConfig: trials must be at least 1");
  if (!std::isfinite(cfg.insertionFactor) || cfg.insertionFactor < cfg.alpha - 1e-12) {
    throw InvalidArgument("SimConfig: insertionFactor must be at least alpha");
  }
  const std::uint64_t m = fill_count(cfg);
  if (m < 1 || m >= cfg.n) {
    throw InvalidArgument("SimConfig: alpha * n must leave at least one key and one free cell");
  }
  if (cfg.mode == TableMode::InsertOnly && total_insertions(cfg) > m) {
    throw InvalidArgument("SimConfig: insert-only mode cannot insert beyond the fill");
  }
  validate(ProbeParams{0, cfg.n}, cfg.probeMode);
}

TrialRecord run_trial(const SimConfig& cfg, std::uint64_t trialIndex) {
  const std::uint64_t trialSeed = derive_seed(cfg.masterSeed, trialIndex);
  RobinHoodTable table(cfg.mode, ProbeParams{derive_seed(trialSeed, 0), cfg.n},
                       cfg.probeMode);
  std::mt19937_64 rng(derive_seed(trialSeed, 1));

  const std::uint64_t m = fill_count(cfg);
  const std::uint64_t total = total_insertions(cfg);
  KeyId next = 0;
  for (; next < m; ++next) table.insert_fresh(next);
  for (; next < total; ++next) {
    table.delete_random(rng);
    table.insert_fresh(next);
  }

  TrialRecord rec;
  const auto counts = table.age_counts();
  rec.maxAge = table.max_age();
  rec.ageCounts.assign(counts.begin(), counts.begin() + rec.maxAge + 1);

  if (cfg.mode == TableMode::TombstoneDeletion) {
    for (CellIndex c = 0; c < cfg.n; ++c) {
      const CellView v = table.cell(c);
      if (v.kind != CellKind::Tombstone) continue;
      if (v.age >= rec.tombCounts.size()) rec.tombCounts.resize(v.age + 1, 0);
      ++rec.tombCounts[v.age];
    }
  }

  // Keys at or beyond `total` were never inserted.
  for (std::uint64_t k = 0; k < cfg.searchSamples; ++k) {
    rec.unsuccessfulProbes += table.search(total + k).probes;
  }
  return rec;
}

SimStats run_experiment(const SimConfig& cfg) {
  validate(cfg);
  std::vector<TrialRecord> records(cfg.trials);

  unsigned workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers, 1, cfg.trials));

  std::atomic<std::uint64_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t k = cursor.fetch_add(1);
      if (k >= cfg.trials) return;
      try {
        records[k] = run_trial(cfg, k);
      } catch (...) {
        std::lock_guard lock(failureMutex);
        if (!failure) failure = std::current_exception();
        cursor.store(cfg.trials);
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Every trial ends with exactly m live keys, so all statistics reduce to
  // integer sums and are independent of trial order.
  const std::uint64_t m = fill_count(cfg);
  SimStats stats;
  stats.trialCount = cfg.trials;
  stats.liveKeys = m;
  stats.insertions = total_insertions(cfg);

  std::uint32_t deepest = 0;
  std::size_t deepestTomb = 0;
  for (const auto& r : records) {
    deepest = std::max(deepest, r.maxAge);
    deepestTomb = std::max(deepestTomb, r.tombCounts.size());
    ++stats.maxAgeDistribution[r.maxAge];
  }

  std::vector<Accumulator> exact(deepest + 1), atLeast(deepest + 1);
  std::vector<Accumulator> tombAtLeast(deepestTomb);
  Accumulator found, missed;
  for (const auto& r : records) {
    std::uint64_t probes = 0;
    std::uint64_t above = 0;
    for (std::size_t a = r.ageCounts.size(); a-- > 1;) {
      above += r.ageCounts[a];
      exact[a].add(r.ageCounts[a]);
      atLeast[a].add(above);
      probes += a * r.ageCounts[a];
    }
    for (std::size_t a = r.ageCounts.size(); a <= deepest; ++a) {
      exact[a].add(0);
      atLeast[a].add(0);
    }
    above = 0;
    for (std::size_t a = deepestTomb; a-- > 1;) {
      if (a < r.tombCounts.size()) above += r.tombCounts[a];
      tombAtLeast[a].add(above);
    }
    found.add(probes);
    missed.add(r.unsuccessfulProbes);
  }

  const auto live = static_cast<double>(m);
  const auto cells = static_cast<double>(cfg.n);
  for (std::uint32_t a = 1; a <= deepest; ++a) {
    stats.perAge[a] = from_sums(exact[a].sum, exact[a].sumSq, cfg.trials, live);
    stats.tail[a] = from_sums(atLeast[a].sum, atLeast[a].sumSq, cfg.trials, cells);
  }
  for (std::uint32_t a = 1; a < deepestTomb; ++a) {
    stats.tombstoneTail[a] =
        from_sums(tombAtLeast[a].sum, tombAtLeast[a].sumSq, cfg.trials, cells);
  }
  stats.successfulCost = from_sums(found.sum, found.sumSq, cfg.trials, live);
  if (cfg.searchSamples > 0) {
    stats.unsuccessfulCost = from_sums(missed.sum, missed.sumSq, cfg.trials,
                                       static_cast<double>(cfg.searchSamples));
  }
  return stats;
}

double SimStats::mean_max_age() const {
  if (trialCount == 0) return 0.0;
  std::uint64_t sum = 0;
  for (const auto& [age, count] : maxAgeDistribution) sum += age * count;
  return static_cast<double>(sum) / static_cast<double>(trialCount);
}

std::uint32_t SimStats::max_max_age() const {
  return maxAgeDistribution.empty() ? 0 : maxAgeDistribution.rbegin()->first;
}

std::vector<ScalingRow> max_age_scaling(const SimConfig& base,
                                        const std::vector<std::uint64_t>& sizes) {
  if (sizes.empty()) throw InvalidArgument("max_age_scaling: sizes must be non-empty");
  for (const auto n : sizes) {
    if (n < 16) throw InvalidArgument("max_age_scaling: every size must be at least 16");
  }
  std::vector<ScalingRow> rows;
  for (const auto n : sizes) {
    SimConfig cfg = base;
    cfg.n = n;
    const SimStats stats = run_experiment(cfg);
    rows.push_back({n, stats.mean_max_age(), stats.max_max_age(), stats.maxAgeDistribution});
  }
  return rows;
}

}  // namespace rhfluid
