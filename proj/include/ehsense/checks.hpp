#pragma once

#include <string>
#include <vector>

#include "ehsense/model.hpp"
#include "ehsense/policy.hpp"
#include "ehsense/solver.hpp"

namespace ehsense {

/// Outcome of one numerical property check. `worst_margin` is the smallest
/// observed slack against the property (negative means violated) and the
/// check passes when worst_margin >= -tolerance.
struct CheckResult {
  std::string name;
  bool passed = true;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  int worst_battery = -1;
  double worst_belief = 0.0;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
  /// One line per check; stable format consumed by tests and the CLI.
  std::string to_text() const;
};

struct LemmaTolerances {
  double convexity_per_rate = 1e-6;  // scaled by r_high
  double monotone = 1e-9;
  double gain_bound = 1e-9;
};

/// Convexity in p, monotonicity in b and in p, and the bound
/// V(b + e_tx - e_sense, p) - V(b, p) < (1 - tau) r_high for b >= 1.
CheckReport check_lemma_suite(const ValueTable& v, const SystemParams& params,
                              const LemmaTolerances& tol = {});

struct DominanceOptions {
  double min_belief = 0.0;  // grid points with p <= min_belief are skipped
  double slack = 1e-6;
};

/// Sensing and then transmitting on GOOD against sensing and deferring on
/// GOOD, for both BAD-state continuations. The margin at (b, p) is
/// (V_sense_tx_on_good - V_sense_defer_on_good) - p (1 - beta)(1 - tau) r_high,
/// over all b >= e_tx.
CheckReport check_good_state_dominance(const ValueTable& v, const SystemParams& params,
                                       const DominanceOptions& options = {});

/// Extracts the greedy policy and its threshold form; fails on a structure
/// violation. Also reports the largest number of thresholds in any row.
CheckResult check_threshold_structure(const ValueTable& v, const SystemParams& params,
                                      int max_thresholds = 3);

/// Agreement of n-sweep solver tables with the exact finite-horizon values for
/// n = 1..horizon, at every battery level and every belief reachable from the
/// given starting beliefs. Allowed gap: gap_per_step * grid step * n * r_high.
/// Skipped (passed, with a note) when the instance exceeds the oracle limits.
CheckResult check_oracle_agreement(const SystemParams& params, const BeliefGrid& grid,
                                   int horizon, const std::vector<double>& start_beliefs,
                                   double gap_per_step = 10.0);

}  // namespace ehsense
