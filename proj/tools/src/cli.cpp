#include "rhfluid_cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "frame.hpp"
#include "repro.hpp"
#include "rhfluid/compare.hpp"
#include "rhfluid/errors.hpp"
#include "rhfluid/fluid.hpp"
#include "rhfluid/sim.hpp"

namespace rhfluid::cli {

namespace {

// Unreadable or malformed files.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Values = std::map<std::uint32_t, double>;

Values tail_values(const Tail& t) {
  Values out;
  for (std::size_t i = 1; i <= t.depth(); ++i) out[static_cast<std::uint32_t>(i)] = t(i);
  return out;
}

Values fraction_values(const Tail& s, double load) {
  if (load > 0.0) return tails_to_key_fractions(s, load);
  Values out;
  for (std::size_t i = 1; i <= s.depth(); ++i) out[static_cast<std::uint32_t>(i)] = 0.0;
  return out;
}

std::uint32_t last_age(const Values& v) {
  std::uint32_t last = 1;
  for (const auto& [age, x] : v) {
    if (x != 0.0) last = std::max(last, age);
  }
  return last;
}

Json series(const Values& v) {
  Json arr = Json::array();
  const std::uint32_t last = last_age(v);
  for (std::uint32_t age = 1; age <= last; ++age) {
    const auto it = v.find(age);
    arr.push_back({{"age", age}, {"value", it == v.end() ? 0.0 : it->second}});
  }
  return arr;
}

Json series(const std::map<std::uint32_t, MeanStd>& v) {
  Json arr = Json::array();
  for (const auto& [age, ms] : v) {
    arr.push_back({{"age", age}, {"mean", ms.mean}, {"stddev", ms.stddev}});
  }
  return arr;
}

Json mean_std(const MeanStd& ms) { return {{"mean", ms.mean}, {"stddev", ms.stddev}}; }

// ---- ode ------------------------------------------------------------------

struct OdeArgs {
  double alpha = 0.0;
  double beta = 0.0;
  double dt = 1e-6;
  std::size_t depth = 64;
  double insertions = 2.0;
  std::string variant = "as-written";
  std::string quantity = "fractions";
};

SolverConfig solver(const OdeArgs& a) {
  SolverConfig cfg;
  cfg.dt = a.dt;
  cfg.depth = a.depth;
  cfg.maxDepth = std::max(cfg.maxDepth, a.depth);
  cfg.variant = a.variant == "conservation" ? TombstoneVariant::ConservationConsistent
                                            : TombstoneVariant::AsWritten;
  return cfg;
}

Output ode_output(const std::string& command, Json params, const OdeArgs& a, const Tail& s,
                  const Tail* u, double load, const FluidState* st) {
  Values chosen;
  if (a.quantity == "fractions") {
    chosen = fraction_values(s, load);
  } else if (a.quantity == "tails") {
    chosen = tail_values(s);
  } else if (u != nullptr) {
    chosen = tail_values(*u);
  } else {
    throw InvalidArgument("--quantity tombstone-tails is only available for `ode tombstone`");
  }

  Output out;
  out.frame = age_frame(chosen);
  out.doc["command"] = command;
  out.doc["params"] = std::move(params);
  out.doc["fractions"] = series(fraction_values(s, load));
  out.doc["tails"] = series(tail_values(s));
  if (u != nullptr) out.doc["tombstoneTails"] = series(tail_values(*u));
  out.doc["unsuccessfulSearchCost"] = unsuccessful_search_cost(s);
  if (st != nullptr) {
    out.doc["state"] = {{"t", st->t},
                        {"insertedMass", st->insertedMass},
                        {"steps", st->steps},
                        {"depth", st->s.depth()},
                        {"truncated", st->truncated}};
    out.notes.push_back("inserted mass " + num(st->insertedMass) + ", t " + num(st->t) +
                        ", " + num(st->steps) + " steps");
  }
  out.notes.push_back("unsuccessful search cost " + num(unsuccessful_search_cost(s)));
  return out;
}

void warn_truncated(const FluidState& st, std::ostream& err) {
  if (st.truncated) {
    err << "warning: tail mass remains at the maximum depth " << st.s.depth() << '\n';
  }
}

// ---- sim --------------------------------------------------------------------

TableMode parse_mode(const std::string& s) {
  if (s == "insert-only") return TableMode::InsertOnly;
  if (s == "tombstone") return TableMode::TombstoneDeletion;
  return TableMode::HardDeletion;
}

ProbeMode parse_probe(const std::string& s) {
  return s == "double" ? ProbeMode::DoubleHashing : ProbeMode::FullyRandom;
}

Json config_json(const SimConfig& cfg) {
  return {{"n", cfg.n},
          {"alpha", cfg.alpha},
          {"trials", cfg.trials},
          {"seed", cfg.masterSeed},
          {"mode", to_string(cfg.mode)},
          {"probe", to_string(cfg.probeMode)},
          {"insertionFactor", cfg.insertionFactor},
          {"searchSamples", cfg.searchSamples}};
}

Output sim_output(const SimConfig& cfg, const SimStats& stats, const std::string& quantity) {
  Output out;
  if (quantity == "fractions") {
    out.frame = age_frame(stats.perAge);
  } else if (quantity == "tails") {
    out.frame = age_frame(stats.tail);
  } else {
    out.frame = age_frame(stats.tombstoneTail);
  }

  out.doc["command"] = "sim run";
  out.doc["config"] = config_json(cfg);
  out.doc["trials"] = stats.trialCount;
  out.doc["liveKeys"] = stats.liveKeys;
  out.doc["insertions"] = stats.insertions;
  out.doc["perAge"] = series(stats.perAge);
  out.doc["tail"] = series(stats.tail);
  out.doc["tombstoneTail"] = series(stats.tombstoneTail);
  out.doc["successfulCost"] = mean_std(stats.successfulCost);
  out.doc["unsuccessfulCost"] = mean_std(stats.unsuccessfulCost);
  Json dist = Json::array();
  for (const auto& [age, count] : stats.maxAgeDistribution) {
    dist.push_back({{"maxAge", age}, {"count", count}});
  }
  out.doc["maxAgeDistribution"] = std::move(dist);
  out.doc["meanMaxAge"] = stats.mean_max_age();

  out.notes.push_back("trials " + num(stats.trialCount) + ", live keys " +
                      num(stats.liveKeys) + ", insertions " + num(stats.insertions));
  out.notes.push_back("successful search " + num(stats.successfulCost.mean) + " +- " +
                      num(stats.successfulCost.stddev));
  out.notes.push_back("unsuccessful search " + num(stats.unsuccessfulCost.mean) + " +- " +
                      num(stats.unsuccessfulCost.stddev));
  out.notes.push_back("max age mean " + num(stats.mean_max_age()) + ", largest " +
                      num(std::uint64_t{stats.max_max_age()}));
  return out;
}

// ---- compare ----------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

bool looks_like_json(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

Json parse_json(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

double to_double(const std::string& s, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw IoError(path + ": not a number: '" + s + "'");
  }
  return v;
}

// Columns of a CSV file with header `age,value[,stddev]`.
std::map<std::uint32_t, MeanStd> read_csv(const std::string& text, const std::string& path) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "age" || header[1] != "value") {
    throw IoError(path + ": expected a header starting with age,value");
  }
  const bool hasStd = header.size() >= 3 && header[2] == "stddev";
  std::map<std::uint32_t, MeanStd> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() < header.size()) throw IoError(path + ": short row '" + line + "'");
    const double age = to_double(cells[0], path);
    if (age < 1 || age != std::floor(age)) throw IoError(path + ": bad age '" + cells[0] + "'");
    rows[static_cast<std::uint32_t>(age)] =
        MeanStd{to_double(cells[1], path), hasStd ? to_double(cells[2], path) : 0.0};
  }
  return rows;
}

AgeFractions read_theory(const std::string& path) {
  const std::string text = slurp(path);
  AgeFractions out;
  if (looks_like_json(text)) {
    const Json doc = parse_json(text, path);
    if (!doc.contains("fractions")) throw IoError(path + ": no \"fractions\" array");
    for (const auto& row : doc.at("fractions")) {
      out[row.at("age").get<std::uint32_t>()] = row.at("value").get<double>();
    }
    return out;
  }
  for (const auto& [age, ms] : read_csv(text, path)) out[age] = ms.mean;
  return out;
}

std::pair<std::map<std::uint32_t, MeanStd>, std::uint64_t> read_sim(
    const std::string& path, std::optional<std::uint64_t> trials) {
  const std::string text = slurp(path);
  if (looks_like_json(text)) {
    const Json doc = parse_json(text, path);
    if (!doc.contains("perAge")) throw IoError(path + ": no \"perAge\" array");
    std::map<std::uint32_t, MeanStd> rows;
    for (const auto& row : doc.at("perAge")) {
      rows[row.at("age").get<std::uint32_t>()] =
          MeanStd{row.at("mean").get<double>(), row.at("stddev").get<double>()};
    }
    return {rows, trials.value_or(doc.value("trials", std::uint64_t{0}))};
  }
  if (!trials) {
    throw InvalidArgument("--trials is required when --sim is a CSV file");
  }
  return {read_csv(text, path), *trials};
}

std::string optional_num(const std::optional<double>& x) { return x ? num(*x) : ""; }

Output compare_output(const ComparisonReport& report) {
  Output out;
  out.frame.header = {"age", "theory", "sim_mean", "sim_stddev", "abs_diff", "z"};
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    out.frame.rows.push_back({num(std::uint64_t{r.age}), num(r.theory), num(r.simMean),
                              num(r.simStd), num(r.absDiff), optional_num(r.z)});
    Json row = {{"age", r.age},         {"theory", r.theory}, {"simMean", r.simMean},
                {"simStd", r.simStd},   {"absDiff", r.absDiff}};
    row["z"] = r.z ? Json(*r.z) : Json(nullptr);
    rows.push_back(std::move(row));
  }
  out.doc["command"] = "compare";
  out.doc["trials"] = report.trials;
  out.doc["rows"] = std::move(rows);
  out.doc["maxAbsDiff"] = report.maxAbsDiff;
  out.doc["maxAbsZ"] = report.maxAbsZ;
  out.notes.push_back("trials " + num(report.trials));
  out.notes.push_back("max |diff| " + num(report.maxAbsDiff));
  out.notes.push_back("max |z| " + num(report.maxAbsZ));
  return out;
}

// ---- scaling ----------------------------------------------------------------

Output scaling_output(const SimConfig& base, const std::vector<ScalingRow>& rows) {
  Output out;
  out.frame.header = {"n", "log2log2n", "mean_max_age", "max_max_age"};
  Json arr = Json::array();
  for (const auto& r : rows) {
    const double ll = std::log2(std::log2(static_cast<double>(r.n)));
    out.frame.rows.push_back({num(r.n), num(ll), num(r.meanMaxAge),
                              num(std::uint64_t{r.maxMaxAge})});
    Json dist = Json::array();
    for (const auto& [age, count] : r.maxAgeDistribution) {
      dist.push_back({{"maxAge", age}, {"count", count}});
    }
    arr.push_back({{"n", r.n},
                   {"log2log2n", ll},
                   {"meanMaxAge", r.meanMaxAge},
                   {"maxMaxAge", r.maxMaxAge},
                   {"maxAgeDistribution", std::move(dist)}});
  }
  Json cfg = config_json(base);
  cfg.erase("n");
  cfg.erase("insertionFactor");
  out.doc["command"] = "scaling";
  out.doc["config"] = std::move(cfg);
  out.doc["rows"] = std::move(arr);
  return out;
}

void write_output(const Output& output, Format format, const std::string& path,
                  std::ostream& out) {
  if (path.empty()) {
    emit(out, output, format);
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  emit(file, output, format);
  file.flush();
  if (!file) throw IoError("failed writing " + path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robin Hood hashing: fluid-limit solvers and simulations", "rhfluid"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "csv";
  std::string outPath;
  unsigned threads = 0;
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "table"}))
      ->capture_default_str();
  app.add_option("--out", outPath, "Write results here instead of stdout");
  app.add_option("--threads", threads, "Simulation worker threads (0 = all cores)");

  std::function<Output()> action;
  OdeArgs oa;

  auto* ode = app.add_subcommand("ode", "Fluid-limit solvers");
  ode->require_subcommand(1);

  auto add_quantity = [&](CLI::App* cmd, bool tombstones) {
    std::vector<std::string> allowed{"fractions", "tails"};
    if (tombstones) allowed.emplace_back("tombstone-tails");
    cmd->add_option("--quantity", oa.quantity, "Per-age key fractions or cell tails")
        ->check(CLI::IsMember(allowed))
        ->capture_default_str();
  };
  auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--dt", oa.dt, "Euler step")->capture_default_str();
    cmd->add_option("--depth", oa.depth, "Initial truncation depth")->capture_default_str();
  };

  auto* insert = ode->add_subcommand("insert", "Insert-only evolution from the empty table");
  insert->add_option("--alpha", oa.alpha, "Target load")->required();
  add_solver(insert);
  add_quantity(insert, false);
  insert->callback([&] {
    action = [&] {
      const FluidState st = insert_only_evolve(oa.alpha, solver(oa));
      warn_truncated(st, err);
      return ode_output("ode insert",
                        {{"alpha", oa.alpha}, {"dt", oa.dt}, {"depth", oa.depth}}, oa,
                        st.s, nullptr, oa.alpha, &st);
    };
  });

  auto* recurrence = ode->add_subcommand("recurrence", "Closed-form insert-only tails");
  recurrence->add_option("--beta", oa.beta, "Load")->required();
  recurrence->add_option("--depth", oa.depth, "Depth")->capture_default_str();
  add_quantity(recurrence, false);
  recurrence->callback([&] {
    action = [&] {
      const Tail s = celis_tails(oa.beta, oa.depth);
      return ode_output("ode recurrence", {{"beta", oa.beta}, {"depth", oa.depth}}, oa, s,
                        nullptr, oa.beta, nullptr);
    };
  });

  auto* tomb = ode->add_subcommand("tombstone", "Fill then churn with tombstones");
  tomb->add_option("--alpha", oa.alpha, "Load")->required();
  tomb->add_option("--insertions", oa.insertions, "Total inserted keys per cell")
      ->capture_default_str();
  tomb->add_option("--variant", oa.variant, "Live-tail gain factor")
      ->check(CLI::IsMember({"as-written", "conservation"}))
      ->capture_default_str();
  add_solver(tomb);
  add_quantity(tomb, true);
  tomb->callback([&] {
    action = [&] {
      const SolverConfig cfg = solver(oa);
      const FluidState fill = insert_only_evolve(oa.alpha, cfg);
      const FluidState st = tombstone_evolve(fill, oa.insertions, oa.alpha, cfg);
      warn_truncated(st, err);
      return ode_output("ode tombstone",
                        {{"alpha", oa.alpha},
                         {"insertions", oa.insertions},
                         {"variant", oa.variant},
                         {"dt", oa.dt},
                         {"depth", oa.depth}},
                        oa, st.s, &st.u, oa.alpha, &st);
    };
  });

  auto* notomb = ode->add_subcommand("no-tombstone", "Fill then churn without tombstones");
  notomb->add_option("--alpha", oa.alpha, "Load")->required();
  notomb->add_option("--insertions", oa.insertions, "Total inserted keys per cell")
      ->capture_default_str();
  add_solver(notomb);
  add_quantity(notomb, false);
  notomb->callback([&] {
    action = [&] {
      const SolverConfig cfg = solver(oa);
      const FluidState fill = insert_only_evolve(oa.alpha, cfg);
      const FluidState st = no_tombstone_evolve(fill, oa.insertions, oa.alpha, cfg);
      warn_truncated(st, err);
      return ode_output("ode no-tombstone",
                        {{"alpha", oa.alpha},
                         {"insertions", oa.insertions},
                         {"dt", oa.dt},
                         {"depth", oa.depth}},
                        oa, st.s, nullptr, oa.alpha, &st);
    };
  });

  auto* equilibrium =
      ode->add_subcommand("equilibrium", "Churn equilibrium without tombstones");
  equilibrium->add_option("--alpha", oa.alpha, "Load")->required();
  equilibrium->add_option("--depth", oa.depth, "Depth")->capture_default_str();
  add_quantity(equilibrium, false);
  equilibrium->callback([&] {
    action = [&] {
      const Tail s = no_tombstone_equilibrium(oa.alpha, oa.depth);
      return ode_output("ode equilibrium", {{"alpha", oa.alpha}, {"depth", oa.depth}}, oa, s,
                        nullptr, oa.alpha, nullptr);
    };
  });

  // sim run
  auto* sim = app.add_subcommand("sim", "Monte Carlo simulations");
  sim->require_subcommand(1);
  auto* simRun = sim->add_subcommand("run", "Run independent trials and aggregate");
  SimConfig sc;
  std::string mode = "insert-only";
  std::string probe = "random";
  std::optional<double> insertions;
  std::string simQuantity = "fractions";
  simRun->add_option("--mode", mode, "Table mode")
      ->check(CLI::IsMember({"insert-only", "tombstone", "no-tombstone"}))
      ->capture_default_str();
  simRun->add_option("--n", sc.n, "Table size")->capture_default_str();
  simRun->add_option("--alpha", sc.alpha, "Load")->capture_default_str();
  simRun->add_option("--trials", sc.trials, "Independent trials")->capture_default_str();
  simRun->add_option("--seed", sc.masterSeed, "Master seed")->capture_default_str();
  simRun->add_option("--probe", probe, "Probe sequence")
      ->check(CLI::IsMember({"random", "double"}))
      ->capture_default_str();
  simRun->add_option("--insertions", insertions,
                     "Total insertions per cell (default: alpha when insert-only, else 2)");
  simRun->add_option("--search-samples", sc.searchSamples,
                     "Unsuccessful searches per trial")
      ->capture_default_str();
  simRun->add_option("--quantity", simQuantity, "Reported per-age statistic")
      ->check(CLI::IsMember({"fractions", "tails", "tombstone-tails"}))
      ->capture_default_str();
  simRun->callback([&] {
    action = [&] {
      sc.mode = parse_mode(mode);
      sc.probeMode = parse_probe(probe);
      sc.insertionFactor =
          insertions.value_or(sc.mode == TableMode::InsertOnly ? sc.alpha : 2.0);
      sc.threads = threads;
      return sim_output(sc, run_experiment(sc), simQuantity);
    };
  });

  // compare
  auto* cmp = app.add_subcommand("compare", "Score simulation means against theory");
  std::string theoryPath, simPath;
  std::optional<std::uint64_t> cmpTrials;
  cmp->add_option("--theory", theoryPath, "Theory fractions (CSV age,value or ode JSON)")
      ->required();
  cmp->add_option("--sim", simPath, "Simulation output (sim JSON, or CSV with --trials)")
      ->required();
  cmp->add_option("--trials", cmpTrials, "Trial count for CSV simulation input");
  cmp->callback([&] {
    action = [&] {
      const AgeFractions theory = read_theory(theoryPath);
      const auto [rows, trials] = read_sim(simPath, cmpTrials);
      return compare_output(compare(theory, rows, trials));
    };
  });

  // scaling
  auto* scaling = app.add_subcommand("scaling", "Maximum age against table size");
  SimConfig scale;
  scale.trials = 100;
  std::vector<std::uint64_t> sizes;
  std::string scaleProbe = "random";
  scaling->add_option("--alpha", scale.alpha, "Load")->capture_default_str();
  scaling->add_option("--sizes", sizes, "Comma-separated table sizes")
      ->required()
      ->delimiter(',');
  scaling->add_option("--trials", scale.trials, "Trials per size")->capture_default_str();
  scaling->add_option("--seed", scale.masterSeed, "Master seed")->capture_default_str();
  scaling->add_option("--probe", scaleProbe, "Probe sequence")
      ->check(CLI::IsMember({"random", "double"}))
      ->capture_default_str();
  scaling->callback([&] {
    action = [&] {
      scale.probeMode = parse_probe(scaleProbe);
      scale.insertionFactor = scale.alpha;
      scale.threads = threads;
      return scaling_output(scale, max_age_scaling(scale, sizes));
    };
  });

  // repro
  auto* repro = app.add_subcommand("repro", "Recompute all reference tables side by side");
  ReproOptions ro;
  bool noSim = false;
  repro->add_option("--n", ro.n, "Simulated table size")->capture_default_str();
  repro->add_option("--trials", ro.trials, "Trials per simulated table")
      ->capture_default_str();
  repro->add_option("--seed", ro.seed, "Master seed")->capture_default_str();
  repro->add_option("--dt", ro.dt, "Euler step")->capture_default_str();
  repro->add_flag("--no-sim", noSim, "Fluid-limit columns only");
  repro->callback([&] {
    action = [&] {
      ro.threads = threads;
      ro.simulate = !noSim;
      return run_repro(ro);
    };
  });

  std::vector<std::string> argvStore;
  argvStore.reserve(args.size() + 1);
  argvStore.emplace_back("rhfluid");
  argvStore.insert(argvStore.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argvStore) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const Format fmt = format == "json"    ? Format::Json
                     : format == "table" ? Format::Table
                                         : Format::Csv;
  try {
    const Output result = action();
    write_output(result, fmt, outPath, out);
    return kOk;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionViolation& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace rhfluid::cli
