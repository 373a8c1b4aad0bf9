#pragma once

#include <array>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "ehsense/belief.hpp"
#include "ehsense/model.hpp"

namespace ehsense {

/// Value function V(b, p) on the belief grid, one row per battery level, plus
/// the per-action Q-values of the last sweep. Q-values of actions that are
/// infeasible or excluded at a battery level hold NaN.
class ValueTable {
 public:
  ValueTable(BeliefGrid grid, int b_max);

  const BeliefGrid& grid() const { return grid_; }
  int b_max() const { return b_max_; }
  int rows() const { return b_max_ + 1; }
  int cols() const { return grid_.size(); }

  std::span<double> row(int b);
  std::span<const double> row(int b) const;
  double value(int b, int i) const { return row(b)[static_cast<std::size_t>(i)]; }
  /// V(b, p) with linear interpolation between grid points.
  double at(int b, double p) const { return grid_.interpolate(row(b), p); }
  std::span<const double> values() const { return values_; }

  bool has_q() const { return !q_[0].empty(); }
  void allocate_q();
  std::span<double> q_row(Action a, int b);
  std::span<const double> q_row(Action a, int b) const;
  double q(Action a, int b, int i) const { return q_row(a, b)[static_cast<std::size_t>(i)]; }
  static bool defined(double q) { return q == q; }

  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();

 private:
  BeliefGrid grid_;
  int b_max_;
  std::vector<double> values_;
  std::array<std::vector<double>, kNumActions> q_;
};

/// Value iteration ran out of sweeps before reaching the tolerance.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(double residual, int iterations);
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

struct SolverOptions {
  double tol = 1e-9;
  int max_iter = 0;  // 0 selects 100 * ceil(1 / (1 - beta))
  ActionSet allowed = ActionSet::all();
};

int default_max_iter(double beta);

// Single-state action values computed from a table V. All of them evaluate the
// next-slot value by grid interpolation. They check the battery requirement of
// the action and throw InfeasibleAction below it.
double backup_defer(const ValueTable& v, int b, double p, const SystemParams& params);
double backup_low(const ValueTable& v, int b, double p, const SystemParams& params);
double backup_high(const ValueTable& v, int b, double p, const SystemParams& params);
/// Sense, transmit on GOOD; covers both the b >= e_tx and the sense-only regime.
double backup_sense_defer(const ValueTable& v, int b, double p, const SystemParams& params);
double backup_sense_transmit(const ValueTable& v, int b, double p, const SystemParams& params);
/// Sense, then defer in either channel state.
double backup_sense_defer_defer(const ValueTable& v, int b, double p,
                                const SystemParams& params);
/// Sense, defer on GOOD, transmit at the low rate on BAD.
double backup_sense_transmit_defer(const ValueTable& v, int b, double p,
                                   const SystemParams& params);
double backup(Action a, const ValueTable& v, int b, double p, const SystemParams& params);

/// Actions the solver maximizes over at battery b.
ActionSet solver_actions(int b, const SystemParams& params, ActionSet allowed);

/// One application of the Bellman operator over the whole grid, with Q-values.
ValueTable bellman_step(const ValueTable& v_in, const SystemParams& params,
                        ActionSet allowed = ActionSet::all());

/// Iterates from V = 0 until the sup-norm change is <= tol. Throws
/// NonConvergence when max_iter sweeps are not enough.
ValueTable value_iteration(const SystemParams& params, const BeliefGrid& grid,
                           const SolverOptions& options = {});

/// Exactly n sweeps from V = 0: the n-stage finite-horizon value on the grid.
ValueTable value_iteration_steps(const SystemParams& params, const BeliefGrid& grid, int n,
                                 ActionSet allowed = ActionSet::all());

}  // namespace ehsense
