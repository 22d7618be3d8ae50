#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rhfluid/tail.hpp"

namespace rhfluid {

/// Which factor multiplies the placement terms of the live-tail equation in
/// the tombstone regime. AsWritten uses (1 - s_i - u_{j+1}), which counts the
/// cells gained when an older key displaces a younger resident; it reproduces
/// the published tombstone table. ConservationConsistent uses
/// (1 - s_1 - u_{j+1}) and is kept for comparison.
enum class TombstoneVariant : std::uint8_t { AsWritten, ConservationConsistent };

struct SolverConfig {
  double dt = 1e-6;
  std::size_t depth = 64;
  double tailTol = 1e-12;
  double fixedPointTol = 1e-12;
  TombstoneVariant variant = TombstoneVariant::AsWritten;
  // Depth doubles whenever the deepest tail exceeds tailTol, up to this cap.
  std::size_t maxDepth = 4096;
  // Observer callback period in Euler steps.
  std::uint64_t observerStride = 1;
};

void validate(const SolverConfig& cfg);

/// Equilibrium of the level process (age of the key in hand). p[i-1] is the
/// probability that the hand key has age >= i; q is the probability of the
/// deletion state.
struct LevelDistribution {
  std::vector<double> p;
  double q = 0.0;

  double at(std::size_t i) const noexcept {
    return i >= 1 && i <= p.size() ? p[i - 1] : 0.0;
  }
};

struct NoTombstoneLevel {
  double p1 = 1.0;
  double q = 0.0;
};

struct FluidState {
  double t = 0.0;
  Tail s;
  Tail u;  // tombstone tails; unused outside the tombstone regime
  // Completed insertions per cell since the empty table.
  double insertedMass = 0.0;
  std::uint64_t steps = 0;
  // Set when the depth cap was hit with mass still above tailTol.
  bool truncated = false;
};

using FluidObserver = std::function<void(const FluidState&)>;

// ---- level process -------------------------------------------------------

/// Insert-only equilibrium: p_1 = 1, p_i = p_{i-1} s_{i-1}, for i = 1..K+1.
LevelDistribution level_insert_only(const Tail& s);

/// Closed form for deletions without tombstones at load alpha.
NoTombstoneLevel no_tombstone_level(double alpha);

/// Fixed point of the tombstone-regime level chain, sums truncated at
/// K = max(depth(s), depth(u)). Throws ConvergenceError if the chain map does
/// not settle below cfg.fixedPointTol within 1e5 iterations.
LevelDistribution tombstone_level_equilibrium(const Tail& s, const Tail& u,
                                              const SolverConfig& cfg = {});

/// One application of the tombstone-regime level-chain update.
LevelDistribution tombstone_level_map(const LevelDistribution& current, const Tail& s,
                                      const Tail& u);

/// max |map(level) - level| over all p_i and q.
double tombstone_level_residual(const LevelDistribution& level, const Tail& s,
                                const Tail& u);

// ---- integrators -----------------------------------------------------------

/// Forward Euler for ds_i/dt = p_i (1 - s_i) from the empty table until the
/// scaled time reaches -ln(1 - alpha), i.e. load alpha. alpha = 0 returns the
/// empty state.
FluidState insert_only_evolve(double alpha, const SolverConfig& cfg = {},
                              const FluidObserver& observer = {});

/// Alternating deletions and fresh insertions without tombstones:
///   ds_i/dt = p_i (1 - s_i) - q s_i / alpha,  p_1 = 1/(2 - alpha),
/// until insertedMass reaches targetInsertedMass.
FluidState no_tombstone_evolve(FluidState start, double targetInsertedMass, double alpha,
                               const SolverConfig& cfg = {},
                               const FluidObserver& observer = {});

/// Alternating deletions and fresh insertions with tombstones:
///   ds_i/dt = sum_{j>=i} (p_j - p_{j+1})(1 - X - u_{j+1}) - q s_i / alpha
///   du_i/dt = q s_i / alpha - sum_{j>=i} p_j (u_j - u_{j+1})
/// with X = s_i (AsWritten) or s_1 (ConservationConsistent) and (p, q)
/// re-solved every step.
FluidState tombstone_evolve(FluidState start, double targetInsertedMass, double alpha,
                            const SolverConfig& cfg = {},
                            const FluidObserver& observer = {});

// ---- closed forms ----------------------------------------------------------

/// s'_1 = beta, s'_{i+1} = 1 - (1 - beta) exp(sum_{j<=i} s'_j).
Tail celis_tails(double beta, std::size_t depth = 64);

/// Equilibrium tails under deletions without tombstones:
/// s_1 = alpha, p_1 = 1/(2 - alpha), p_i = p_{i-1} s_{i-1},
/// s_i = p_i / (p_i + (1 - alpha) / (alpha (2 - alpha))).
Tail no_tombstone_equilibrium(double alpha, std::size_t depth = 64);

/// Expected probes of a short-circuiting unsuccessful search:
/// sum_{j=1}^{K+1} prod_{k<j} s_k.
double unsuccessful_search_cost(const Tail& s);

// ---- doubly-exponential decay ----------------------------------------------

enum class DecayStatus : std::uint8_t { Passed, NoDecayDetected, Degenerate };

struct DecayCheck {
  DecayStatus status = DecayStatus::Degenerate;
  std::size_t crossover = 0;
  // log s_{i+1} <= 2 log s_i - log c for every i >= crossover.
  double c = 0.0;
  // s_i <= c * base^(2^i) for i >= crossover.
  double base = 0.0;

  bool passed() const noexcept { return status != DecayStatus::NoDecayDetected; }
};

DecayCheck decay_envelope_check(const Tail& s);

}  // namespace rhfluid
