#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "support/cli_run.hpp"

using testing_support::csv_values;
using testing_support::run_cli;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rhfluid_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, RecurrenceCsv) {
  const auto r = run_cli({"ode", "recurrence", "--beta", "0.95", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("age,value\n", 0), 0u);
  const auto v = csv_values(r.out);
  EXPECT_NEAR(v.at(3), 0.323793385, 5e-10);
  EXPECT_NEAR(v.at(1), 0.083458403, 1e-9);
  EXPECT_NEAR(v.at(7), 0.000012417, 1e-9);
}

TEST(Cli, RowsIncreasingWithEnoughDigits) {
  const auto r = run_cli({"ode", "equilibrium", "--alpha", "0.9"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  unsigned expect = 1;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    ASSERT_NE(comma, std::string::npos);
    EXPECT_EQ(std::stoul(line.substr(0, comma)), expect++);
    const std::string value = line.substr(comma + 1);
    if (value.find('e') == std::string::npos && std::stod(value) > 1e-3) {
      std::size_t digits = 0;
      bool leading = true;
      for (const char c : value) {
        if (c < '0' || c > '9') continue;
        if (c != '0') leading = false;
        if (!leading) ++digits;
      }
      EXPECT_GE(digits, 9u) << line;
    }
  }
  EXPECT_GE(expect, 16u);
}

TEST(Cli, InsertAlphaZero) {
  const auto r = run_cli({"ode", "insert", "--alpha", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& [age, v] : csv_values(r.out)) EXPECT_EQ(v, 0.0) << age;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"bogus"}).code, 1);
  EXPECT_EQ(run_cli({"ode", "insert", "--alpha", "0.5", "--nope"}).code, 1);
  EXPECT_EQ(run_cli({"ode", "insert", "--alpha", "1.5"}).code, 1);
  EXPECT_EQ(run_cli({"ode", "insert", "--alpha", "0.5", "--format", "xml"}).code, 1);
  const auto missing = run_cli({"compare", "--theory", "/nonexistent/a.csv", "--sim",
                                "/nonexistent/b.json"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_FALSE(missing.err.empty());
  const auto unwritable =
      run_cli({"--out", "/nonexistent/dir/x.csv", "ode", "recurrence", "--beta", "0.5"});
  EXPECT_EQ(unwritable.code, 2);
}

TEST(Cli, SimRunByteIdentical) {
  const std::vector<std::string> base = {"sim", "run", "--mode", "insert-only", "--n", "1024",
                                         "--alpha", "0.95", "--trials", "50", "--seed", "1"};
  const fs::path a = scratch("a.csv"), b = scratch("b.csv");
  auto args = base;
  args.insert(args.begin(), {"--out", a.string(), "--threads", "1"});
  ASSERT_EQ(run_cli(args).code, 0);
  args = base;
  args.insert(args.begin(), {"--out", b.string(), "--threads", "4"});
  ASSERT_EQ(run_cli(args).code, 0);
  const std::string sa = slurp(a);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, slurp(b));
  EXPECT_EQ(sa.rfind("age,value,stddev\n", 0), 0u);
}

TEST(Cli, CompareFromFiles) {
  const fs::path theory = scratch("theory.json"), sim = scratch("sim.json");
  ASSERT_EQ(run_cli({"--format", "json", "--out", theory.string(), "ode", "recurrence",
                     "--beta", "0.9"})
                .code,
            0);
  ASSERT_EQ(run_cli({"--format", "json", "--out", sim.string(), "sim", "run", "--mode",
                     "insert-only", "--n", "4096", "--alpha", "0.9", "--trials", "40"})
                .code,
            0);
  const auto r = run_cli({"--format", "json", "compare", "--theory", theory.string(), "--sim",
                          sim.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc.at("trials").get<int>(), 40);
  EXPECT_LT(doc.at("maxAbsDiff").get<double>(), 0.02);
  EXPECT_FALSE(doc.at("rows").empty());

  // CSV theory plus CSV simulation needs --trials.
  const fs::path tcsv = scratch("theory.csv"), scsv = scratch("sim.csv");
  ASSERT_EQ(run_cli({"--out", tcsv.string(), "ode", "recurrence", "--beta", "0.9"}).code, 0);
  ASSERT_EQ(run_cli({"--out", scsv.string(), "sim", "run", "--mode", "insert-only", "--n",
                     "4096", "--alpha", "0.9", "--trials", "40"})
                .code,
            0);
  EXPECT_EQ(run_cli({"compare", "--theory", tcsv.string(), "--sim", scsv.string()}).code, 1);
  const auto c = run_cli(
      {"compare", "--theory", tcsv.string(), "--sim", scsv.string(), "--trials", "40"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out.rfind("age,theory,sim_mean,sim_stddev,abs_diff,z\n", 0), 0u);
}

TEST(Cli, JsonAndTableFormats) {
  const auto j = run_cli({"--format", "json", "ode", "recurrence", "--beta", "0.95"});
  ASSERT_EQ(j.code, 0);
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_NEAR(doc.at("fractions").at(3).at("value").get<double>(), 0.303363594, 1e-9);
  EXPECT_NEAR(doc.at("unsuccessfulSearchCost").get<double>(), 3.59, 0.01);

  const auto t = run_cli({"--format", "table", "ode", "recurrence", "--beta", "0.95"});
  ASSERT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("age"), std::string::npos);
  EXPECT_NE(t.out.find("---"), std::string::npos);
  EXPECT_NE(t.out.find("0.32379338"), std::string::npos);
}

TEST(Cli, Scaling) {
  const auto r = run_cli({"scaling", "--alpha", "0.9", "--sizes", "1024,2048", "--trials", "5",
                          "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("n,log2log2n,mean_max_age,max_max_age\n", 0), 0u);
  EXPECT_EQ(run_cli({"scaling", "--alpha", "0.9", "--sizes", "1024,x"}).code, 1);
}
