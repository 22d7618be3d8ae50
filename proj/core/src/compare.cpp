#include "rhfluid/compare.hpp"

#include <cmath>
#include <set>

#include "rhfluid/errors.hpp"

namespace rhfluid {

AgeFractions tails_to_key_fractions(const Tail& s, double load) {
  if (!(load > 0.0)) throw InvalidArgument("tails_to_key_fractions: load must be positive");
  AgeFractions out;
  for (std::size_t i = 1; i <= s.depth(); ++i) {
    out[static_cast<std::uint32_t>(i)] = (s(i) - s(i + 1)) / load;
  }
  return out;
}

Tail key_fractions_to_tails(const AgeFractions& fractions, double load) {
  if (!(load > 0.0)) throw InvalidArgument("key_fractions_to_tails: load must be positive");
  const std::size_t depth = fractions.empty() ? 0 : fractions.rbegin()->first;
  Tail s(depth);
  double acc = 0.0;
  for (std::size_t i = depth; i >= 1; --i) {
    const auto it = fractions.find(static_cast<std::uint32_t>(i));
    if (it != fractions.end()) acc += it->second;
    s[i] = acc * load;
  }
  return s;
}

ComparisonReport compare(const AgeFractions& theory,
                         const std::map<std::uint32_t, MeanStd>& sim,
                         std::uint64_t trials) {
  std::set<std::uint32_t> ages;
  for (const auto& [age, _] : theory) ages.insert(age);
  for (const auto& [age, _] : sim) ages.insert(age);

  ComparisonReport report;
  report.trials = trials;
  const double root = std::sqrt(static_cast<double>(trials));
  for (const auto age : ages) {
    ComparisonRow row;
    row.age = age;
    if (const auto it = theory.find(age); it != theory.end()) row.theory = it->second;
    if (const auto it = sim.find(age); it != sim.end()) {
      row.simMean = it->second.mean;
      row.simStd = it->second.stddev;
    }
    const double diff = row.simMean - row.theory;
    row.absDiff = std::abs(diff);
    if (row.simStd > 0.0 && trials > 0) row.z = diff / (row.simStd / root);

    report.maxAbsDiff = std::max(report.maxAbsDiff, row.absDiff);
    const bool negligible = row.theory < 1e-10 && row.simMean == 0.0;
    if (row.z && !negligible) report.maxAbsZ = std::max(report.maxAbsZ, std::abs(*row.z));
    report.rows.push_back(row);
  }
  return report;
}

ComparisonReport compare(const AgeFractions& theory, const SimStats& sim) {
  return compare(theory, sim.perAge, sim.trialCount);
}

}  // namespace rhfluid
