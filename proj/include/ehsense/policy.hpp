#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ehsense/belief.hpp"
#include "ehsense/model.hpp"
#include "ehsense/solver.hpp"

namespace ehsense {

/// Decision rule used by the simulator: (battery, belief) -> action.
using Policy = std::function<Action(int battery, double belief)>;

/// One action per (battery, grid point).
class PolicyTable {
 public:
  PolicyTable(BeliefGrid grid, int b_max);

  const BeliefGrid& grid() const { return grid_; }
  int b_max() const { return b_max_; }
  Action at(int b, int i) const { return actions_[offset(b, i)]; }
  void set(int b, int i, Action a) { actions_[offset(b, i)] = a; }
  std::span<const Action> row(int b) const;
  /// Action of the grid point nearest to p.
  Action action_at(int b, double p) const { return at(b, grid_.nearest(p)); }

 private:
  std::size_t offset(int b, int i) const {
    return static_cast<std::size_t>(b) * static_cast<std::size_t>(grid_.size()) +
           static_cast<std::size_t>(i);
  }
  BeliefGrid grid_;
  int b_max_;
  std::vector<Action> actions_;
};

/// Q-values within this distance of the maximum count as ties; ties go to the
/// action latest in the order D < L < OD < OT < H.
inline constexpr double kTieTolerance = 1e-12;

/// Greedy policy with respect to the Q-values stored in `v`.
PolicyTable extract_policy(const ValueTable& v, const SystemParams& params);

/// Belief intervals of one battery level: labels[k] applies on
/// [breakpoints[k], breakpoints[k + 1]); the last interval also contains 1.
struct ThresholdRow {
  std::vector<double> breakpoints{0.0, 1.0};
  std::vector<Action> labels{Action::Defer};

  Action action_at(double p) const;
  /// Interior breakpoints.
  int num_thresholds() const { return static_cast<int>(labels.size()) - 1; }
  bool operator==(const ThresholdRow&) const = default;
};

struct ThresholdPolicy {
  std::vector<ThresholdRow> rows;  // index = battery level

  int b_max() const { return static_cast<int>(rows.size()) - 1; }
  Action action_at(int b, double p) const {
    return rows[static_cast<std::size_t>(b)].action_at(p);
  }
  bool operator==(const ThresholdPolicy&) const = default;
};

/// A battery row whose action runs break the proven interval structure.
class StructureViolation : public std::runtime_error {
 public:
  StructureViolation(int battery, const std::string& what);
  int battery() const { return battery_; }

 private:
  int battery_;
};

/// Run-length encodes every row into intervals with breakpoints at midpoints
/// between differing neighbours. Isolated single cells sandwiched between two
/// runs of the same action are absorbed (one grid step of slack). Rows are
/// then validated: single-rate models must follow D,O,D,H (b >= e_tx) or
/// D,O,D (b < e_tx); otherwise H must be one suffix run and OD and OT at most
/// one run each. Throws StructureViolation naming the first bad row.
ThresholdPolicy extract_thresholds(const PolicyTable& policy, const SystemParams& params);

/// Structural check of a single row; empty string when valid.
std::string row_structure_error(const ThresholdRow& row, int battery, const SystemParams& params);

Policy table_policy(PolicyTable table);
Policy threshold_policy(ThresholdPolicy thresholds);
Policy defer_policy();
/// H whenever the battery covers a transmission, D otherwise.
Policy greedy_policy(const SystemParams& params);
/// Senses whenever the battery covers sensing; transmits only on GOOD and
/// only when the battery also covers the transmission.
Policy opportunistic_policy(const SystemParams& params);

/// Value iteration restricted to {D, H}, then threshold extraction.
ThresholdPolicy single_threshold_policy(const SystemParams& params, const BeliefGrid& grid,
                                        const SolverOptions& options = {});

}  // namespace ehsense
