#pragma once

// Internal kernels shared by the level solvers and the integrators. All arrays
// are padded and 1-based: x[1..depth] hold values, x[depth + 1] == 0.

#include <cstddef>

namespace rhfluid::detail {

// Tails below this are treated as having died out.
inline constexpr double kFlush = 1e-300;

/// Exact solve of the truncated tombstone-regime level equations. Writes
/// pi[1..depth] (probability the hand key has age exactly i; pi[depth+1] = 0)
/// and returns q. Uses the downward balance recurrence
///   pi_{i-1} (s_{i-1} + u_i) = p_i (1 - s_{i-1}) - sum_{j>=i} pi_j u_{j+1}
/// followed by normalisation.
double solve_tombstone_level(const double* s, const double* u, std::size_t depth,
                             double* pi);

/// Applies the level-chain map to tail probabilities p[1..depth]
/// (p[depth+1] = 0). Writes next[1..depth] and returns the new q.
double tombstone_level_step(const double* p, const double* s, const double* u,
                            std::size_t depth, double* next);

}  // namespace rhfluid::detail
