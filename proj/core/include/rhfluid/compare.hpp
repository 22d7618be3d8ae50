#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rhfluid/sim.hpp"
#include "rhfluid/tail.hpp"

namespace rhfluid {

/// fraction(i) = (s_i - s_{i+1}) / load, s_{K+1} = 0. Ages with a zero
/// fraction are kept so the result covers 1..K.
AgeFractions tails_to_key_fractions(const Tail& s, double load);

/// Inverse of tails_to_key_fractions: s_i = load * sum_{j>=i} fraction(j).
Tail key_fractions_to_tails(const AgeFractions& fractions, double load);

struct ComparisonRow {
  std::uint32_t age = 0;
  double theory = 0.0;
  double simMean = 0.0;
  double simStd = 0.0;
  double absDiff = 0.0;
  // (simMean - theory) / (simStd / sqrt(trials)); empty when simStd == 0.
  std::optional<double> z;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::uint64_t trials = 0;
  double maxAbsDiff = 0.0;
  double maxAbsZ = 0.0;
};

/// Per-age comparison over the union of ages in either input. Ages where the
/// theory value is below 1e-10 and the simulation never saw the age do not
/// contribute to maxAbsZ.
ComparisonReport compare(const AgeFractions& theory, const SimStats& sim);

/// Same, against per-age (mean, stddev) pairs from some other source.
ComparisonReport compare(const AgeFractions& theory,
                         const std::map<std::uint32_t, MeanStd>& sim,
                         std::uint64_t trials);

}  // namespace rhfluid
