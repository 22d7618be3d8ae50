#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rhfluid/fluid.hpp"

namespace rhfluid {

// The tail decays doubly exponentially once the log-gaps
// D_i = ln s_i - ln s_{i+1} grow geometrically. We look for the first index
// from which every gap ratio D_{i+1} / D_i stays at or above kMinRatio through
// the end of the support, then fit c = min s_i^2 / s_{i+1} over that stretch.
DecayCheck decay_envelope_check(const Tail& s) {
  constexpr double kMinRatio = 1.5;
  constexpr std::size_t kMinChecks = 2;

  DecayCheck out;
  std::size_t m = 0;
  while (m < s.depth() && s(m + 1) > 0.0) ++m;
  if (m < 4) return out;  // Degenerate

  std::vector<double> ls(m + 1, 0.0);
  for (std::size_t i = 1; i <= m; ++i) ls[i] = std::log(s(i));
  std::vector<double> gap(m, 0.0);  // gap[i] for i in 1..m-1
  for (std::size_t i = 1; i < m; ++i) gap[i] = ls[i] - ls[i + 1];

  out.status = DecayStatus::NoDecayDetected;
  // Ratios are r_i = gap[i+1] / gap[i] for i in 1..m-2. Scan from the top for
  // the longest suffix where all of them hold.
  std::size_t first = m - 1;
  while (first > 1) {
    const std::size_t i = first - 1;
    if (!(gap[i] > 0.0) || gap[i + 1] < kMinRatio * gap[i]) break;
    first = i;
  }
  // first is now the smallest i with r_i ok for all later ratios (or m-1 if
  // none hold). Skip any saturated prefix where s_j == 1.
  std::size_t j = first;
  while (j < m && s(j) >= 1.0) ++j;

  // The envelope c * base^(2^i) only decays once s_j < c, so move the
  // crossover up until that holds.
  double logc = 0.0;
  double lead = 0.0;  // ln(s_j / c)
  for (;; ++j) {
    if (j + kMinChecks > m - 1) return out;
    logc = std::numeric_limits<double>::infinity();
    for (std::size_t i = j; i < m; ++i) logc = std::min(logc, 2.0 * ls[i] - ls[i + 1]);
    lead = ls[j] - logc;
    if (lead < 0.0) break;
  }
  const double c = std::exp(logc);

  out.status = DecayStatus::Passed;
  out.crossover = j;
  out.c = c;
  out.base = std::exp(lead * std::ldexp(1.0, -static_cast<int>(j)));
  return out;
}

}  // namespace rhfluid
