#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "level_detail.hpp"
#include "rhfluid/errors.hpp"
#include "rhfluid/fluid.hpp"

namespace rhfluid {

void validate(const SolverConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw InvalidArgument("SolverConfig: dt must be positive");
  }
  if (cfg.depth < 2) throw InvalidArgument("SolverConfig: depth must be at least 2");
  if (cfg.maxDepth < cfg.depth) {
    throw InvalidArgument("SolverConfig: maxDepth must be at least depth");
  }
  if (!(cfg.tailTol >= 0.0)) throw InvalidArgument("SolverConfig: tailTol must be >= 0");
  if (!(cfg.fixedPointTol > 0.0)) {
    throw InvalidArgument("SolverConfig: fixedPointTol must be positive");
  }
  if (cfg.observerStride == 0) {
    throw InvalidArgument("SolverConfig: observerStride must be positive");
  }
}

namespace {

using detail::kFlush;

double clamp_unit(double x) {
  if (x < kFlush) return 0.0;
  return x > 1.0 ? 1.0 : x;
}

// Index of the last positive entry of a padded array, 0 if none.
std::size_t support_of(const double* x, std::size_t depth) {
  for (std::size_t i = depth; i >= 1; --i) {
    if (x[i] > 0.0) return i;
  }
  return 0;
}

// Doubles the depth while the deepest cell still carries mass. Returns true
// if storage was resized.
bool extend_if_needed(FluidState& st, const SolverConfig& cfg) {
  const std::size_t k = st.s.depth();
  if (st.s(k) + st.u(k) <= cfg.tailTol) return false;
  if (k >= cfg.maxDepth) {
    st.truncated = true;
    return false;
  }
  const std::size_t grown = std::min(2 * k, cfg.maxDepth);
  st.s.resize(grown);
  st.u.resize(grown);
  return true;
}

class Notifier {
 public:
  Notifier(const FluidObserver& obs, std::uint64_t stride) : obs_(obs), stride_(stride) {}

  void step(const FluidState& st) {
    if (obs_ && st.steps % stride_ == 0) {
      obs_(st);
      last_ = st.steps;
    }
  }
  void finish(const FluidState& st) {
    if (obs_ && last_ != st.steps) obs_(st);
  }

 private:
  const FluidObserver& obs_;
  std::uint64_t stride_;
  std::uint64_t last_ = ~std::uint64_t{0};
};

void check_churn_start(const FluidState& start, double alpha, double target,
                       const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument(std::string(who) + ": alpha must lie in (0, 1)");
  }
  if (!std::isfinite(target)) {
    throw InvalidArgument(std::string(who) + ": target inserted mass must be finite");
  }
  if (std::abs(start.s(1) - alpha) > 1e-3) {
    throw PreconditionViolation(std::string(who) + ": start state must be at load alpha");
  }
}

FluidState prepare(FluidState start, const SolverConfig& cfg) {
  const std::size_t k = std::max({start.s.depth(), start.u.depth(), cfg.depth});
  start.s.resize(k);
  start.u.resize(k);
  return start;
}

}  // namespace

FluidState insert_only_evolve(double alpha, const SolverConfig& cfg,
                              const FluidObserver& observer) {
  validate(cfg);
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidArgument("insert_only_evolve: alpha must lie in [0, 1)");
  }
  FluidState st;
  st.s = Tail(cfg.depth);
  st.u = Tail(cfg.depth);
  Notifier notify(observer, cfg.observerStride);
  notify.step(st);

  // Time to reach load alpha is -ln(1 - alpha) since s_1 = 1 - e^{-t}.
  const double horizon = -std::log1p(-alpha);
  const auto total = static_cast<std::uint64_t>(std::ceil(horizon / cfg.dt));
  const double dt = cfg.dt;

  std::vector<double> ds(st.s.depth() + 2, 0.0);
  std::size_t width = 1;
  for (std::uint64_t n = 0; n < total; ++n) {
    double* s = st.s.padded();
    const std::size_t k = st.s.depth();
    double p = 1.0;
    for (std::size_t i = 1; i <= width; ++i) {
      ds[i] = p * (1.0 - s[i]);
      p *= s[i];
    }
    st.insertedMass += dt * (1.0 - s[1]);
    for (std::size_t i = 1; i <= width; ++i) s[i] = clamp_unit(s[i] + dt * ds[i]);
    width = std::min(k, support_of(s, width) + 1);
    st.t += dt;
    ++st.steps;
    if (width == k && extend_if_needed(st, cfg)) {
      ds.resize(st.s.depth() + 2, 0.0);
      width = std::min(st.s.depth(), width + 1);
    }
    notify.step(st);
  }
  notify.finish(st);
  return st;
}

FluidState no_tombstone_evolve(FluidState start, double targetInsertedMass, double alpha,
                               const SolverConfig& cfg, const FluidObserver& observer) {
  validate(cfg);
  check_churn_start(start, alpha, targetInsertedMass, "no_tombstone_evolve");
  FluidState st = prepare(std::move(start), cfg);
  const NoTombstoneLevel level = no_tombstone_level(alpha);
  const double dt = cfg.dt;
  const double drain = level.q / alpha;

  Notifier notify(observer, cfg.observerStride);
  notify.step(st);

  const double remaining = targetInsertedMass - st.insertedMass;
  const std::uint64_t total =
      remaining > 0.0 ? static_cast<std::uint64_t>(std::ceil(remaining / (level.q * dt))) : 0;
  const double mass0 = st.insertedMass;

  std::vector<double> ds(st.s.depth() + 2, 0.0);
  std::size_t width = std::min(st.s.depth(), support_of(st.s.padded(), st.s.depth()) + 1);
  for (std::uint64_t n = 0; n < total; ++n) {
    double* s = st.s.padded();
    const std::size_t k = st.s.depth();
    double p = level.p1;
    for (std::size_t i = 1; i <= width; ++i) {
      ds[i] = p * (1.0 - s[i]) - drain * s[i];
      p *= s[i];
    }
    for (std::size_t i = 1; i <= width; ++i) s[i] = clamp_unit(s[i] + dt * ds[i]);
    width = std::min(k, support_of(s, width) + 1);
    st.t += dt;
    ++st.steps;
    st.insertedMass = mass0 + static_cast<double>(n + 1) * level.q * dt;
    if (width == k && extend_if_needed(st, cfg)) {
      ds.resize(st.s.depth() + 2, 0.0);
      width = std::min(st.s.depth(), width + 1);
    }
    notify.step(st);
  }
  notify.finish(st);
  return st;
}

FluidState tombstone_evolve(FluidState start, double targetInsertedMass, double alpha,
                            const SolverConfig& cfg, const FluidObserver& observer) {
  validate(cfg);
  check_churn_start(start, alpha, targetInsertedMass, "tombstone_evolve");
  FluidState st = prepare(std::move(start), cfg);
  const double dt = cfg.dt;
  const bool asWritten = cfg.variant == TombstoneVariant::AsWritten;

  Notifier notify(observer, cfg.observerStride);
  notify.step(st);

  std::vector<double> pi, p, ds, du;
  auto size_buffers = [&] {
    const std::size_t n = st.s.depth() + 2;
    pi.assign(n, 0.0);
    p.assign(n, 0.0);
    ds.assign(n, 0.0);
    du.assign(n, 0.0);
  };
  size_buffers();

  auto live_width = [&] {
    const std::size_t k = st.s.depth();
    const std::size_t top =
        std::max(support_of(st.s.padded(), k), support_of(st.u.padded(), k));
    return std::min(k, top + 1);
  };
  std::size_t width = live_width();

  while (st.insertedMass < targetInsertedMass) {
    double* s = st.s.padded();
    double* u = st.u.padded();
    const std::size_t k = st.s.depth();

    const double q = detail::solve_tombstone_level(s, u, width, pi.data());
    p[width + 1] = 0.0;
    for (std::size_t i = width; i >= 1; --i) p[i] = p[i + 1] + pi[i];

    const double drain = q / alpha;
    double exact = 0.0;     // sum_{j>=i} pi_j
    double toTomb = 0.0;    // sum_{j>=i} pi_j u_{j+1}
    double reuse = 0.0;     // sum_{j>=i} p_j (u_j - u_{j+1})
    for (std::size_t i = width; i >= 1; --i) {
      exact += pi[i];
      toTomb += pi[i] * u[i + 1];
      reuse += p[i] * (u[i] - u[i + 1]);
      const double x = asWritten ? s[i] : s[1];
      ds[i] = exact * (1.0 - x) - toTomb - drain * s[i];
      du[i] = drain * s[i] - reuse;
    }
    for (std::size_t i = 1; i <= width; ++i) {
      s[i] = clamp_unit(s[i] + dt * ds[i]);
      u[i] = clamp_unit(u[i] + dt * du[i]);
    }
    st.t += dt;
    ++st.steps;
    st.insertedMass += dt * q;

    const std::size_t top = std::max(support_of(s, width), support_of(u, width));
    width = std::min(k, top + 1);
    if (width == k && extend_if_needed(st, cfg)) {
      size_buffers();
      width = live_width();
    }
    notify.step(st);
  }
  notify.finish(st);
  return st;
}

}  // namespace rhfluid
