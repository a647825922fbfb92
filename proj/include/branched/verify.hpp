#pragma once

#include <cstdint>
#include <vector>

#include "branched/report.hpp"

namespace branched {

struct VerifyOptions {
  bool full = false;     // adds the solve_E sandwich sweep, the full N = 2 grid and delta = 1e-6
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Runs every module's invariant checks. Randomized samples depend on the
/// seed; verdicts must not.
std::vector<CheckResult> run_verify(const VerifyOptions& options);

}  // namespace branched
