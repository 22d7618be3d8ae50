#include "repro.hpp"

#include <cmath>
#include <optional>
#include <span>

#include "rhfluid/compare.hpp"
#include "rhfluid/fluid.hpp"
#include "rhfluid/sim.hpp"
#include "rhfluid_cli/reference.hpp"

namespace rhfluid::cli {

namespace {

struct Block {
  std::string name;
  std::span<const double> reference;
  AgeFractions theory;
  std::optional<SimStats> sim;
};

Frame block_frame(const Block& b, bool withName) {
  Frame f;
  if (withName) f.header.push_back("table");
  for (const char* h : {"age", "reference", "theory", "sim_mean", "sim_stddev", "z"}) {
    f.header.emplace_back(h);
  }
  std::optional<ComparisonReport> report;
  if (b.sim) report = compare(b.theory, *b.sim);

  for (std::size_t i = 0; i < b.reference.size(); ++i) {
    const auto age = static_cast<std::uint32_t>(i + 1);
    const auto it = b.theory.find(age);
    std::vector<std::string> row;
    if (withName) row.push_back(b.name);
    row.push_back(num(std::uint64_t{age}));
    row.push_back(num(b.reference[i]));
    row.push_back(num(it == b.theory.end() ? 0.0 : it->second));
    if (report) {
      const ComparisonRow* match = nullptr;
      for (const auto& r : report->rows) {
        if (r.age == age) match = &r;
      }
      row.push_back(num(match ? match->simMean : 0.0));
      row.push_back(num(match ? match->simStd : 0.0));
      row.push_back(match && match->z ? num(*match->z) : "");
    } else {
      row.insert(row.end(), {"", "", ""});
    }
    f.rows.push_back(std::move(row));
  }
  return f;
}

Json block_json(const Block& b) {
  Json rows = Json::array();
  std::optional<ComparisonReport> report;
  if (b.sim) report = compare(b.theory, *b.sim);
  for (std::size_t i = 0; i < b.reference.size(); ++i) {
    const auto age = static_cast<std::uint32_t>(i + 1);
    const auto it = b.theory.find(age);
    Json row = {{"age", age},
                {"reference", b.reference[i]},
                {"theory", it == b.theory.end() ? 0.0 : it->second}};
    if (report) {
      for (const auto& r : report->rows) {
        if (r.age != age) continue;
        row["simMean"] = r.simMean;
        row["simStd"] = r.simStd;
        row["z"] = r.z ? Json(*r.z) : Json(nullptr);
      }
    }
    rows.push_back(std::move(row));
  }
  Json out = {{"table", b.name}, {"rows", std::move(rows)}};
  if (report) {
    out["maxAbsDiff"] = report->maxAbsDiff;
    out["maxAbsZ"] = report->maxAbsZ;
  }
  return out;
}

}  // namespace

Output run_repro(const ReproOptions& options) {
  SolverConfig cfg;
  cfg.dt = options.dt;

  auto simulate = [&](TableMode mode, ProbeMode probe, double alpha,
                      double factor) -> std::optional<SimStats> {
    if (!options.simulate) return std::nullopt;
    SimConfig sc;
    sc.n = options.n;
    sc.alpha = alpha;
    sc.trials = options.trials;
    sc.masterSeed = options.seed;
    sc.mode = mode;
    sc.probeMode = probe;
    sc.insertionFactor = factor;
    sc.threads = options.threads;
    return run_experiment(sc);
  };

  std::vector<Block> blocks;
  std::vector<std::string> notes;

  const FluidState fill95 = insert_only_evolve(0.95, cfg);
  const AgeFractions euler95 = tails_to_key_fractions(fill95.s, 0.95);
  auto random95 = simulate(TableMode::InsertOnly, ProbeMode::FullyRandom, 0.95, 0.95);
  blocks.push_back({"insert-only", reference::kInsertOnlyEuler, euler95, random95});
  blocks.push_back({"insert-only-recurrence", reference::kInsertOnlyRecurrence,
                    tails_to_key_fractions(celis_tails(0.95), 0.95), std::nullopt});
  blocks.push_back({"insert-only-double", reference::kInsertOnlyEuler, euler95,
                    simulate(TableMode::InsertOnly, ProbeMode::DoubleHashing, 0.95, 0.95)});

  const FluidState fill90 = insert_only_evolve(0.9, cfg);
  const FluidState tomb = tombstone_evolve(fill90, 2.0, 0.9, cfg);
  blocks.push_back({"tombstone", reference::kTombstone,
                    tails_to_key_fractions(tomb.s, 0.9),
                    simulate(TableMode::TombstoneDeletion, ProbeMode::FullyRandom, 0.9, 2.0)});

  const FluidState churn2 = no_tombstone_evolve(fill90, 2.0, 0.9, cfg);
  blocks.push_back({"no-tombstone", reference::kNoTombstone,
                    tails_to_key_fractions(churn2.s, 0.9),
                    simulate(TableMode::HardDeletion, ProbeMode::FullyRandom, 0.9, 2.0)});

  const FluidState churn10 = no_tombstone_evolve(fill90, 10.0, 0.9, cfg);
  blocks.push_back({"equilibrium", reference::kEquilibrium,
                    tails_to_key_fractions(no_tombstone_equilibrium(0.9), 0.9),
                    simulate(TableMode::HardDeletion, ProbeMode::FullyRandom, 0.9, 10.0)});
  blocks.push_back({"no-tombstone-10n", reference::kEquilibrium,
                    tails_to_key_fractions(churn10.s, 0.9), std::nullopt});

  Output out;
  out.doc["command"] = "repro";
  out.doc["options"] = {{"n", options.n},
                        {"trials", options.trials},
                        {"seed", options.seed},
                        {"dt", options.dt},
                        {"simulate", options.simulate}};
  Json tables = Json::array();
  for (const auto& b : blocks) {
    const Frame named = block_frame(b, true);
    if (out.frame.header.empty()) out.frame.header = named.header;
    out.frame.rows.insert(out.frame.rows.end(), named.rows.begin(), named.rows.end());
    out.sections.emplace_back(b.name, block_frame(b, false));
    tables.push_back(block_json(b));
  }
  out.doc["tables"] = std::move(tables);

  const double unsuccessfulTheory = unsuccessful_search_cost(fill95.s);
  Json costs = {{"unsuccessfulTheory", unsuccessfulTheory},
                {"successfulReference", reference::kSuccessfulSearch},
                {"unsuccessfulReference", reference::kUnsuccessfulSearch}};
  notes.push_back("alpha 0.95 unsuccessful search, theory " + num(unsuccessfulTheory));
  if (random95) {
    costs["successfulSim"] = {{"mean", random95->successfulCost.mean},
                              {"stddev", random95->successfulCost.stddev}};
    costs["unsuccessfulSim"] = {{"mean", random95->unsuccessfulCost.mean},
                                {"stddev", random95->unsuccessfulCost.stddev}};
    notes.push_back("alpha 0.95 successful search, simulated " +
                    num(random95->successfulCost.mean) + " +- " +
                    num(random95->successfulCost.stddev));
    notes.push_back("alpha 0.95 unsuccessful search, simulated " +
                    num(random95->unsuccessfulCost.mean) + " +- " +
                    num(random95->unsuccessfulCost.stddev));
    notes.push_back("alpha 0.95 largest age seen " +
                    num(std::uint64_t{random95->max_max_age()}));
  }
  out.doc["searchCosts"] = std::move(costs);
  out.notes = std::move(notes);
  return out;
}

}  // namespace rhfluid::cli
