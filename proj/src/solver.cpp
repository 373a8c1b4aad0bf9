#include "ehsense/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "ehsense/kernels.hpp"

namespace ehsense {

namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void require_battery(bool ok, Action a, int b) {
  if (!ok) {
    throw InfeasibleAction(std::string(action_label(a)) + " backup needs more energy than battery " +
                           std::to_string(b));
  }
}

// Expected V(min(b' + m, b_max), p) over the harvest pmf.
double continuation(const ValueTable& v, int post, double p, const SystemParams& params) {
  double sum = 0.0;
  for (int m = 0; m < params.num_harvest_levels(); ++m) {
    const double q = params.energy_pmf[idx(m)];
    if (q > 0.0) sum += q * v.at(std::min(post + m, params.b_max), p);
  }
  return sum;
}

}  // namespace

ValueTable::ValueTable(BeliefGrid grid, int b_max)
    : grid_(std::move(grid)), b_max_(b_max) {
  if (b_max < 0) throw ModelError("b_max must be nonnegative");
  values_.assign(idx(rows()) * idx(cols()), 0.0);
}

std::span<double> ValueTable::row(int b) {
  return std::span<double>(values_).subspan(idx(b) * idx(cols()), idx(cols()));
}

std::span<const double> ValueTable::row(int b) const {
  return std::span<const double>(values_).subspan(idx(b) * idx(cols()), idx(cols()));
}

void ValueTable::allocate_q() {
  for (auto& q : q_) q.assign(values_.size(), kUndefined);
}

std::span<double> ValueTable::q_row(Action a, int b) {
  return std::span<double>(q_[idx(action_code(a))]).subspan(idx(b) * idx(cols()), idx(cols()));
}

std::span<const double> ValueTable::q_row(Action a, int b) const {
  return std::span<const double>(q_[idx(action_code(a))])
      .subspan(idx(b) * idx(cols()), idx(cols()));
}

NonConvergence::NonConvergence(double residual, int iterations)
    : std::runtime_error("value iteration did not converge after " + std::to_string(iterations) +
                         " sweeps (residual " + std::to_string(residual) + ")"),
      residual_(residual),
      iterations_(iterations) {}

int default_max_iter(double beta) {
  // The small offset keeps 1 / (1 - 0.9) = 10.000000000000002 at 10.
  return 100 * static_cast<int>(std::ceil(1.0 / (1.0 - beta) - 1e-9));
}

double backup_defer(const ValueTable& v, int b, double p, const SystemParams& params) {
  return params.beta * continuation(v, b, belief_update_no_obs(p, params), params);
}

double backup_low(const ValueTable& v, int b, double p, const SystemParams& params) {
  require_battery(b >= params.e_tx, Action::LowRate, b);
  return params.r_low +
         params.beta * continuation(v, b - params.e_tx, belief_update_no_obs(p, params), params);
}

double backup_high(const ValueTable& v, int b, double p, const SystemParams& params) {
  require_battery(b >= params.e_tx, Action::HighRate, b);
  const int post = b - params.e_tx;
  const double good = params.r_high + params.beta * continuation(v, post, params.lambda1, params);
  const double bad = params.beta * continuation(v, post, params.lambda0, params);
  return p * good + (1.0 - p) * bad;
}

double backup_sense_defer(const ValueTable& v, int b, double p, const SystemParams& params) {
  require_battery(b >= params.e_sense, Action::SenseDefer, b);
  const int after_sense = b - params.e_sense;
  const double bad = params.beta * continuation(v, after_sense, params.lambda0, params);
  if (b < params.e_tx) {
    const double good = params.beta * continuation(v, after_sense, params.lambda1, params);
    return p * good + (1.0 - p) * bad;
  }
  const double good = (1.0 - params.tau()) * params.r_high +
                      params.beta * continuation(v, b - params.e_tx, params.lambda1, params);
  return p * good + (1.0 - p) * bad;
}

double backup_sense_transmit(const ValueTable& v, int b, double p, const SystemParams& params) {
  require_battery(b >= params.e_tx, Action::SenseTransmit, b);
  const int post = b - params.e_tx;
  const double keep = 1.0 - params.tau();
  const double good =
      keep * params.r_high + params.beta * continuation(v, post, params.lambda1, params);
  const double bad =
      keep * params.r_low + params.beta * continuation(v, post, params.lambda0, params);
  return p * good + (1.0 - p) * bad;
}

double backup_sense_defer_defer(const ValueTable& v, int b, double p,
                                const SystemParams& params) {
  require_battery(b >= params.e_sense, Action::SenseDefer, b);
  const int after_sense = b - params.e_sense;
  const double good = params.beta * continuation(v, after_sense, params.lambda1, params);
  const double bad = params.beta * continuation(v, after_sense, params.lambda0, params);
  return p * good + (1.0 - p) * bad;
}

double backup_sense_transmit_defer(const ValueTable& v, int b, double p,
                                   const SystemParams& params) {
  require_battery(b >= params.e_tx, Action::SenseTransmit, b);
  const double good =
      params.beta * continuation(v, b - params.e_sense, params.lambda1, params);
  const double bad = (1.0 - params.tau()) * params.r_low +
                     params.beta * continuation(v, b - params.e_tx, params.lambda0, params);
  return p * good + (1.0 - p) * bad;
}

double backup(Action a, const ValueTable& v, int b, double p, const SystemParams& params) {
  switch (a) {
    case Action::Defer: return backup_defer(v, b, p, params);
    case Action::LowRate: return backup_low(v, b, p, params);
    case Action::SenseDefer: return backup_sense_defer(v, b, p, params);
    case Action::SenseTransmit: return backup_sense_transmit(v, b, p, params);
    case Action::HighRate: return backup_high(v, b, p, params);
  }
  return 0.0;
}

ActionSet solver_actions(int b, const SystemParams& params, ActionSet allowed) {
  ActionSet set{Action::Defer};
  for (Action a : kAllActions) {
    if (allowed.contains(a) && is_feasible(a, b, params)) set.insert(a);
  }
  return set;
}

namespace {

// Whole-grid Bellman operator. The harvest expectation is taken first, on
// every post-action battery level, so each action reduces to one gather (for
// the no-observation actions) or one affine mix in p (for the observing ones).
class BellmanSweep {
 public:
  BellmanSweep(const SystemParams& params, const BeliefGrid& grid, ActionSet allowed)
      : params_(params), grid_(grid), allowed_(allowed), atoms_(harvest_support(params)) {
    const int n = grid.size();
    j_idx_.resize(idx(n));
    j_w_.resize(idx(n));
    for (int i = 0; i < n; ++i) {
      const auto loc = grid.locate(belief_update_no_obs(grid.point(i), params));
      j_idx_[idx(i)] = loc.index;
      j_w_[idx(i)] = loc.weight;
    }
    cont_.assign(idx(params.b_max + 1) * idx(n), 0.0);
    gathered_.resize(idx(n));
    scratch_.resize(idx(n));
  }

  void apply(const ValueTable& in, ValueTable& out, bool record_q) {
    const double beta = params_.beta;
    const double keep = 1.0 - params_.tau();
    for (int post = 0; post <= params_.b_max; ++post) {
      auto c = cont_row(post);
      std::fill(c.begin(), c.end(), 0.0);
      for (const auto& atom : atoms_) {
        kernels::axpy(atom.prob, in.row(std::min(post + atom.amount, params_.b_max)), c);
      }
    }
    if (record_q) out.allocate_q();
    const auto points = grid_.points();

    for (int b = 0; b <= params_.b_max; ++b) {
      auto best = out.row(b);
      const ActionSet actions = solver_actions(b, params_, allowed_);
      auto target = [&](Action a) { return record_q ? out.q_row(a, b) : std::span<double>(scratch_); };

      {
        auto q = record_q ? out.q_row(Action::Defer, b) : best;
        kernels::gather_lerp(cont_row(b), j_idx_, j_w_, gathered_);
        kernels::scale_shift(gathered_, beta, 0.0, q);
        if (record_q) std::copy(q.begin(), q.end(), best.begin());
      }
      if (actions.contains(Action::LowRate)) {
        auto q = target(Action::LowRate);
        kernels::gather_lerp(cont_row(b - params_.e_tx), j_idx_, j_w_, gathered_);
        kernels::scale_shift(gathered_, beta, params_.r_low, q);
        kernels::max_into(best, q);
      }
      if (actions.contains(Action::SenseDefer)) {
        auto q = target(Action::SenseDefer);
        const int after_sense = b - params_.e_sense;
        const double bad = beta * lookup(after_sense, params_.lambda0);
        const double good = b < params_.e_tx
                                ? beta * lookup(after_sense, params_.lambda1)
                                : keep * params_.r_high +
                                      beta * lookup(b - params_.e_tx, params_.lambda1);
        kernels::mix(points, good, bad, q);
        kernels::max_into(best, q);
      }
      if (actions.contains(Action::SenseTransmit)) {
        auto q = target(Action::SenseTransmit);
        const int post = b - params_.e_tx;
        const double good = keep * params_.r_high + beta * lookup(post, params_.lambda1);
        const double bad = keep * params_.r_low + beta * lookup(post, params_.lambda0);
        kernels::mix(points, good, bad, q);
        kernels::max_into(best, q);
      }
      if (actions.contains(Action::HighRate)) {
        auto q = target(Action::HighRate);
        const int post = b - params_.e_tx;
        const double good = params_.r_high + beta * lookup(post, params_.lambda1);
        const double bad = beta * lookup(post, params_.lambda0);
        kernels::mix(points, good, bad, q);
        kernels::max_into(best, q);
      }
    }
  }

 private:
  std::span<double> cont_row(int post) {
    const auto n = idx(grid_.size());
    return std::span<double>(cont_).subspan(idx(post) * n, n);
  }
  double lookup(int post, double p) { return grid_.interpolate(cont_row(post), p); }

  const SystemParams& params_;
  const BeliefGrid& grid_;
  ActionSet allowed_;
  std::vector<HarvestAtom> atoms_;
  std::vector<std::int32_t> j_idx_;
  std::vector<double> j_w_;
  std::vector<double> cont_;
  std::vector<double> gathered_;
  std::vector<double> scratch_;
};

}  // namespace

ValueTable bellman_step(const ValueTable& v_in, const SystemParams& params, ActionSet allowed) {
  if (v_in.b_max() != params.b_max) throw ModelError("value table does not match b_max");
  BellmanSweep sweep(params, v_in.grid(), allowed);
  ValueTable out(v_in.grid(), params.b_max);
  sweep.apply(v_in, out, true);
  out.iterations = v_in.iterations + 1;
  out.residual = kernels::max_abs_diff(out.values(), v_in.values());
  return out;
}

ValueTable value_iteration(const SystemParams& params, const BeliefGrid& grid,
                           const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw ModelError("solver tolerance must be positive");
  const int max_iter = options.max_iter > 0 ? options.max_iter : default_max_iter(params.beta);
  BellmanSweep sweep(params, grid, options.allowed);
  ValueTable current(grid, params.b_max);
  ValueTable next(grid, params.b_max);
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    sweep.apply(current, next, false);
    residual = kernels::max_abs_diff(next.values(), current.values());
    if (residual <= options.tol) {
      // Redo the final sweep with Q-values recorded; it is deterministic.
      sweep.apply(current, next, true);
      next.iterations = it;
      next.residual = residual;
      return next;
    }
    std::swap(current, next);
  }
  throw NonConvergence(residual, max_iter);
}

ValueTable value_iteration_steps(const SystemParams& params, const BeliefGrid& grid, int n,
                                 ActionSet allowed) {
  if (n < 0) throw ModelError("step count must be nonnegative");
  BellmanSweep sweep(params, grid, allowed);
  ValueTable current(grid, params.b_max);
  ValueTable next(grid, params.b_max);
  for (int it = 1; it <= n; ++it) {
    sweep.apply(current, next, it == n);
    next.residual = kernels::max_abs_diff(next.values(), current.values());
    next.iterations = it;
    std::swap(current, next);
  }
  return current;
}

}  // namespace ehsense
