#pragma once

#include <cstdint>

#include "frame.hpp"

namespace rhfluid::cli {

struct ReproOptions {
  std::uint64_t n = 65536;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  double dt = 1e-6;
  unsigned threads = 0;
  bool simulate = true;
};

/// Recomputes every reference table: fluid-limit columns always, simulation
/// columns when options.simulate is set.
Output run_repro(const ReproOptions& options);

}  // namespace rhfluid::cli
