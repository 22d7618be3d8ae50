#include <cmath>

#include "level_detail.hpp"
#include "rhfluid/errors.hpp"
#include "rhfluid/fluid.hpp"

namespace rhfluid {

Tail celis_tails(double beta, std::size_t depth) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw InvalidArgument("celis_tails: beta must lie in [0, 1)");
  }
  if (depth < 1) throw InvalidArgument("celis_tails: depth must be positive");
  Tail s(depth);
  s[1] = beta;
  // 1 - s_{i+1} = (1 - beta) exp(s_1 + ... + s_i) = (1 - s_i) exp(s_i), so
  // s_{i+1} = s e^s - (e^s - 1). Evaluated without cancellation for small s.
  for (std::size_t i = 1; i < depth; ++i) {
    const double x = s[i];
    double next;
    if (x < 1e-3) {
      // sum_{k>=2} x^k (k - 1) / k!
      double term = x * x / 2.0;
      next = term;
      for (int k = 3; k < 12; ++k) {
        term *= x / k;
        next += term * (k - 1);
      }
    } else {
      next = x * std::exp(x) - std::expm1(x);
    }
    s[i + 1] = next < detail::kFlush ? 0.0 : next;
    if (s[i + 1] == 0.0) break;
  }
  return s;
}

Tail no_tombstone_equilibrium(double alpha, std::size_t depth) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("no_tombstone_equilibrium: alpha must lie in (0, 1)");
  }
  if (depth < 1) throw InvalidArgument("no_tombstone_equilibrium: depth must be positive");
  Tail s(depth);
  const double z = (1.0 - alpha) / (alpha * (2.0 - alpha));
  double p = 1.0 / (2.0 - alpha);
  s[1] = alpha;
  for (std::size_t i = 2; i <= depth; ++i) {
    p *= s[i - 1];
    const double v = p / (p + z);
    if (v < detail::kFlush) break;
    s[i] = v;
  }
  return s;
}

double unsuccessful_search_cost(const Tail& s) {
  double total = 0.0;
  double prod = 1.0;
  for (std::size_t j = 1; j <= s.depth() + 1; ++j) {
    total += prod;
    prod *= s(j);
    if (prod == 0.0) break;
  }
  return total;
}

}  // namespace rhfluid
