#pragma once

#include <map>
#include <stdexcept>
#include <utility>

#include "ehsense/model.hpp"
#include "ehsense/solver.hpp"

namespace ehsense {

/// The exact recursion would touch more states than the guard allows.
class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Size guard for the exact solver: horizon, battery capacity, harvest levels.
struct OracleLimits {
  int max_horizon = 10;
  int max_b_max = 10;
  int max_harvest_levels = 3;
};

/// n-stage optimal value V(b0, p0, n) by exhaustive recursion over channel
/// outcomes and harvests. Beliefs are tracked symbolically as k-fold
/// no-observation updates of p0, lambda0 or lambda1, so no grid and no
/// interpolation is involved. Stage values start from V(., ., 0) = 0.
double exact_finite_horizon(const SystemParams& params, int b0, double p0, int n,
                            const OracleLimits& limits = {});

struct OracleResult {
  int horizon = 0;
  std::map<std::pair<int, double>, double> values;  // (battery, belief) -> exact value
  double max_abs_gap_vs_solver = 0.0;
  int worst_battery = 0;
  double worst_belief = 0.0;
};

/// Exact values at every battery level and every belief reachable from p0
/// within n slots, compared with an n-sweep solver table.
OracleResult compare_with_solver(const SystemParams& params, const ValueTable& n_step_table,
                                 double p0, int n, const OracleLimits& limits = {});

}  // namespace ehsense
