#include "ehsense/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "ehsense/belief.hpp"

// Deliberately independent of the grid solver: it enumerates channel outcomes
// and harvests through the model's slot-level functions instead of using the
// closed-form action values.

namespace ehsense {

namespace {

enum class Origin : int { Start = 0, Bad = 1, Good = 2 };

struct BeliefNode {
  Origin origin;
  int updates;  // no-observation steps applied to the origin
};

class ExactSolver {
 public:
  ExactSolver(const SystemParams& params, double p0) : params_(params), p0_(p0) {}

  double value(int b, BeliefNode node, int n) {
    if (n == 0) return 0.0;
    const auto key = std::make_tuple(b, static_cast<int>(node.origin), node.updates, n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const double p = belief_of(node);
    double best = -1.0;
    for (Action a : kAllActions) {
      if (!is_feasible(a, b, params_)) continue;
      double total = 0.0;
      for (bool good : {false, true}) {
        const double weight = good ? p : 1.0 - p;
        if (weight == 0.0) continue;
        const BeliefNode next = successor(node, observe(a, good));
        double future = 0.0;
        for (int m = 0; m < params_.num_harvest_levels(); ++m) {
          const double q = params_.energy_pmf[static_cast<std::size_t>(m)];
          if (q == 0.0) continue;
          future += q * value(next_battery(b, m, a, good, params_), next, n - 1);
        }
        total += weight * (slot_bits(a, b, good, params_) + params_.beta * future);
      }
      best = std::max(best, total);
    }
    memo_.emplace(key, best);
    return best;
  }

 private:
  double belief_of(BeliefNode node) const {
    double p = node.origin == Origin::Start  ? p0_
               : node.origin == Origin::Bad ? params_.lambda0
                                            : params_.lambda1;
    for (int k = 0; k < node.updates; ++k) p = belief_update_no_obs(p, params_);
    return p;
  }

  static BeliefNode successor(BeliefNode node, ChannelObservation obs) {
    switch (obs) {
      case ChannelObservation::None: return {node.origin, node.updates + 1};
      case ChannelObservation::AckHigh:
      case ChannelObservation::SensedGood: return {Origin::Good, 0};
      case ChannelObservation::NackHigh:
      case ChannelObservation::SensedBad: return {Origin::Bad, 0};
    }
    return node;
  }

  const SystemParams& params_;
  double p0_;
  std::map<std::tuple<int, int, int, int>, double> memo_;
};

void check_limits(const SystemParams& params, int n, const OracleLimits& limits) {
  if (n < 1) throw ModelError("horizon must be >= 1");
  if (n > limits.max_horizon || params.b_max > limits.max_b_max ||
      params.num_harvest_levels() > limits.max_harvest_levels) {
    throw InstanceTooLarge("exact solver limited to horizon <= " +
                           std::to_string(limits.max_horizon) + ", b_max <= " +
                           std::to_string(limits.max_b_max) + ", harvest levels <= " +
                           std::to_string(limits.max_harvest_levels));
  }
}

}  // namespace

double exact_finite_horizon(const SystemParams& params, int b0, double p0, int n,
                            const OracleLimits& limits) {
  check_limits(params, n, limits);
  if (b0 < 0 || b0 > params.b_max) throw ModelError("battery outside [0, b_max]");
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw ModelError("belief outside [0, 1]");
  ExactSolver solver(params, p0);
  return solver.value(b0, {Origin::Start, 0}, n);
}

OracleResult compare_with_solver(const SystemParams& params, const ValueTable& n_step_table,
                                 double p0, int n, const OracleLimits& limits) {
  check_limits(params, n, limits);
  OracleResult result;
  result.horizon = n;
  for (double p : reachable_beliefs(p0, n, params)) {
    ExactSolver solver(params, p);
    for (int b = 0; b <= params.b_max; ++b) {
      const double exact = solver.value(b, {Origin::Start, 0}, n);
      result.values[{b, p}] = exact;
      const double gap = std::abs(exact - n_step_table.at(b, p));
      if (gap > result.max_abs_gap_vs_solver) {
        result.max_abs_gap_vs_solver = gap;
        result.worst_battery = b;
        result.worst_belief = p;
      }
    }
  }
  return result;
}

}  // namespace ehsense
