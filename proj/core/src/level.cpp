#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "level_detail.hpp"
#include "rhfluid/errors.hpp"
#include "rhfluid/fluid.hpp"

namespace rhfluid {

namespace detail {

double solve_tombstone_level(const double* s, const double* u, std::size_t depth,
                             double* pi) {
  std::fill(pi, pi + depth + 2, 0.0);
  if (depth == 0) return 0.0;

  // States above `top` are unreachable (or negligibly so).
  std::size_t top = 1;
  for (std::size_t i = 2; i <= depth; ++i) {
    if (s[i - 1] + u[i] > 1e-250) {
      top = i;
    } else {
      break;
    }
  }

  pi[top] = 1.0;
  double tailMass = 1.0;             // p_i, unnormalised
  double tombWeight = u[top + 1];    // sum_{j>=i} pi_j u_{j+1}
  std::size_t scaledFrom = top;
  for (std::size_t i = top; i >= 2; --i) {
    double v = (tailMass * (1.0 - s[i - 1]) - tombWeight) / (s[i - 1] + u[i]);
    if (v < 0.0) v = 0.0;
    pi[i - 1] = v;
    tailMass += v;
    tombWeight += v * u[i];
    if (tailMass > 1e50) {
      const double f = 1.0 / tailMass;
      for (std::size_t k = i - 1; k <= scaledFrom; ++k) pi[k] *= f;
      tombWeight *= f;
      tailMass = 1.0;
    }
  }

  double placed = 0.0;
  for (std::size_t j = 1; j <= top; ++j) {
    placed += pi[j] * std::max(0.0, 1.0 - s[1] - u[j + 1]);
  }
  const double norm = 1.0 / (tailMass + placed);
  for (std::size_t j = 1; j <= top; ++j) pi[j] *= norm;
  return placed * norm;
}

double tombstone_level_step(const double* p, const double* s, const double* u,
                            std::size_t depth, double* next) {
  // Suffix sum of (p_j - p_{j+1}) u_{j+1}, built from the top down.
  double q = 0.0;
  double tomb = 0.0;
  for (std::size_t j = depth; j >= 1; --j) {
    const double exact = p[j] - p[j + 1];
    tomb += exact * u[j + 1];
    q += exact * std::max(0.0, 1.0 - s[1] - u[j + 1]);
    // next_{j+1} = p_j s_j + sum_{k>=j} (p_k - p_{k+1}) u_{k+1}
    if (j + 1 <= depth) next[j + 1] = p[j] * s[j] + tomb;
  }
  next[1] = 1.0 - q;
  next[depth + 1] = 0.0;
  return q;
}

}  // namespace detail

LevelDistribution level_insert_only(const Tail& s) {
  LevelDistribution level;
  level.p.resize(s.depth() + 1);
  double p = 1.0;
  for (std::size_t i = 1; i <= s.depth() + 1; ++i) {
    level.p[i - 1] = p;
    p *= s(i);
  }
  return level;
}

NoTombstoneLevel no_tombstone_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("no_tombstone_level: alpha must lie in (0, 1)");
  }
  return {1.0 / (2.0 - alpha), (1.0 - alpha) / (2.0 - alpha)};
}

namespace {

struct Padded {
  std::vector<double> s;
  std::vector<double> u;
  std::size_t depth;
};

Padded pad(const Tail& s, const Tail& u) {
  Padded out;
  out.depth = std::max(s.depth(), u.depth());
  out.s.assign(out.depth + 2, 0.0);
  out.u.assign(out.depth + 2, 0.0);
  for (std::size_t i = 1; i <= out.depth; ++i) {
    out.s[i] = s(i);
    out.u[i] = u(i);
  }
  return out;
}

std::vector<double> padded_p(const LevelDistribution& level, std::size_t depth) {
  std::vector<double> p(depth + 2, 0.0);
  for (std::size_t i = 1; i <= depth; ++i) p[i] = level.at(i);
  return p;
}

}  // namespace

LevelDistribution tombstone_level_map(const LevelDistribution& current, const Tail& s,
                                      const Tail& u) {
  const Padded t = pad(s, u);
  const std::vector<double> p = padded_p(current, t.depth);
  std::vector<double> next(t.depth + 2, 0.0);
  LevelDistribution out;
  out.q = detail::tombstone_level_step(p.data(), t.s.data(), t.u.data(), t.depth,
                                       next.data());
  out.p.assign(next.begin() + 1, next.begin() + 1 + static_cast<std::ptrdiff_t>(t.depth));
  return out;
}

double tombstone_level_residual(const LevelDistribution& level, const Tail& s,
                                const Tail& u) {
  const LevelDistribution mapped = tombstone_level_map(level, s, u);
  double worst = std::abs(mapped.q - level.q);
  for (std::size_t i = 1; i <= mapped.p.size(); ++i) {
    worst = std::max(worst, std::abs(mapped.at(i) - level.at(i)));
  }
  return worst;
}

LevelDistribution tombstone_level_equilibrium(const Tail& s, const Tail& u,
                                              const SolverConfig& cfg) {
  const Padded t = pad(s, u);
  if (t.s[1] + t.u[1] > 1.0 + 1e-12) {
    throw InvalidArgument("tombstone_level_equilibrium: s_1 + u_1 exceeds 1");
  }

  std::vector<double> pi(t.depth + 2, 0.0);
  double q = detail::solve_tombstone_level(t.s.data(), t.u.data(), t.depth, pi.data());

  std::vector<double> p(t.depth + 2, 0.0);
  for (std::size_t i = t.depth; i >= 1; --i) p[i] = p[i + 1] + pi[i];

  // Polish with the chain map itself; normally the direct solve is already a
  // fixed point to round-off and this exits on the first pass.
  constexpr int kMaxIterations = 100000;
  std::vector<double> next(t.depth + 2, 0.0);
  bool settled = false;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const double nextQ = detail::tombstone_level_step(p.data(), t.s.data(), t.u.data(),
                                                      t.depth, next.data());
    double change = std::abs(nextQ - q);
    for (std::size_t i = 1; i <= t.depth; ++i) {
      change = std::max(change, std::abs(next[i] - p[i]));
    }
    if (change < cfg.fixedPointTol) {
      settled = true;
      break;
    }
    std::swap(p, next);
    q = nextQ;
  }
  if (!settled) {
    throw ConvergenceError("tombstone_level_equilibrium: no fixed point within " +
                           std::to_string(kMaxIterations) + " iterations");
  }

  LevelDistribution out;
  out.q = q;
  out.p.assign(p.begin() + 1, p.begin() + 1 + static_cast<std::ptrdiff_t>(t.depth));
  return out;
}

}  // namespace rhfluid
