#include "ehsense/policy.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>

namespace ehsense {

PolicyTable::PolicyTable(BeliefGrid grid, int b_max)
    : grid_(std::move(grid)), b_max_(b_max) {
  actions_.assign(static_cast<std::size_t>(b_max + 1) * static_cast<std::size_t>(grid_.size()),
                  Action::Defer);
}

std::span<const Action> PolicyTable::row(int b) const {
  return std::span<const Action>(actions_).subspan(offset(b, 0),
                                                   static_cast<std::size_t>(grid_.size()));
}

PolicyTable extract_policy(const ValueTable& v, const SystemParams& params) {
  if (!v.has_q()) throw ModelError("value table carries no Q-values");
  PolicyTable policy(v.grid(), v.b_max());
  for (int b = 0; b <= v.b_max(); ++b) {
    const ActionSet feasible = feasible_actions(b, params);
    for (int i = 0; i < v.cols(); ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (Action a : kAllActions) {
        const double q = v.q(a, b, i);
        if (feasible.contains(a) && ValueTable::defined(q)) best = std::max(best, q);
      }
      Action chosen = Action::Defer;
      for (Action a : kAllActions) {
        const double q = v.q(a, b, i);
        if (feasible.contains(a) && ValueTable::defined(q) && q >= best - kTieTolerance)
          chosen = a;
      }
      policy.set(b, i, chosen);
    }
  }
  return policy;
}

Action ThresholdRow::action_at(double p) const {
  // first breakpoint strictly above p marks the end of p's interval
  const auto it = std::upper_bound(breakpoints.begin() + 1, breakpoints.end() - 1, p);
  const auto k = static_cast<std::size_t>(it - (breakpoints.begin() + 1));
  return labels[k];
}

StructureViolation::StructureViolation(int battery, const std::string& what)
    : std::runtime_error("battery row " + std::to_string(battery) + ": " + what),
      battery_(battery) {}

namespace {

struct Run {
  Action label;
  int first;
  int last;
};

std::vector<Run> run_length(std::span<const Action> row) {
  std::vector<Run> runs;
  for (int i = 0; i < static_cast<int>(row.size()); ++i) {
    const Action a = row[static_cast<std::size_t>(i)];
    if (!runs.empty() && runs.back().label == a) {
      runs.back().last = i;
    } else {
      runs.push_back({a, i, i});
    }
  }
  return runs;
}

void absorb_single_cells(std::vector<Run>& runs) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 1; k + 1 < runs.size(); ++k) {
      if (runs[k].first == runs[k].last && runs[k - 1].label == runs[k + 1].label) {
        runs[k - 1].last = runs[k + 1].last;
        runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(k),
                   runs.begin() + static_cast<std::ptrdiff_t>(k + 2));
        changed = true;
        break;
      }
    }
  }
}

bool is_subsequence(const std::vector<Action>& labels, std::span<const Action> pattern) {
  std::size_t j = 0;
  for (Action a : labels) {
    while (j < pattern.size() && pattern[j] != a) ++j;
    if (j == pattern.size()) return false;
    ++j;
  }
  return true;
}

std::string label_list(const std::vector<Action>& labels) {
  std::string s;
  for (Action a : labels) {
    if (!s.empty()) s += ",";
    s += action_label(a);
  }
  return s;
}

}  // namespace

std::string row_structure_error(const ThresholdRow& row, int battery, const SystemParams& params) {
  const auto& labels = row.labels;
  for (Action a : labels) {
    if (!is_feasible(a, battery, params))
      return std::string(action_label(a)) + " is infeasible at this battery level";
  }
  if (params.single_rate()) {
    static constexpr std::array<Action, 4> kAbove{Action::Defer, Action::SenseDefer,
                                                  Action::Defer, Action::HighRate};
    static constexpr std::array<Action, 3> kBelow{Action::Defer, Action::SenseDefer,
                                                  Action::Defer};
    const bool ok = battery >= params.e_tx ? is_subsequence(labels, kAbove)
                                           : is_subsequence(labels, kBelow);
    if (!ok) return "labels " + label_list(labels) + " break the D,O,D,H pattern";
    return {};
  }
  auto count = [&](Action a) { return std::count(labels.begin(), labels.end(), a); };
  if (count(Action::HighRate) > 1 ||
      (count(Action::HighRate) == 1 && labels.back() != Action::HighRate))
    return "H region is not a single suffix interval (" + label_list(labels) + ")";
  if (count(Action::SenseDefer) > 1) return "OD region is split (" + label_list(labels) + ")";
  if (count(Action::SenseTransmit) > 1) return "OT region is split (" + label_list(labels) + ")";
  return {};
}

ThresholdPolicy extract_thresholds(const PolicyTable& policy, const SystemParams& params) {
  ThresholdPolicy out;
  const auto& grid = policy.grid();
  for (int b = 0; b <= policy.b_max(); ++b) {
    auto runs = run_length(policy.row(b));
    absorb_single_cells(runs);
    ThresholdRow row;
    row.breakpoints = {0.0};
    row.labels.clear();
    for (std::size_t k = 0; k < runs.size(); ++k) {
      if (k > 0) {
        const int left = runs[k - 1].last;
        row.breakpoints.push_back(0.5 * (grid.point(left) + grid.point(left + 1)));
      }
      row.labels.push_back(runs[k].label);
    }
    row.breakpoints.push_back(1.0);
    if (auto err = row_structure_error(row, b, params); !err.empty())
      throw StructureViolation(b, err);
    out.rows.push_back(std::move(row));
  }
  return out;
}

Policy table_policy(PolicyTable table) {
  return [t = std::move(table)](int b, double p) { return t.action_at(b, p); };
}

Policy threshold_policy(ThresholdPolicy thresholds) {
  return [t = std::move(thresholds)](int b, double p) { return t.action_at(b, p); };
}

Policy defer_policy() {
  return [](int, double) { return Action::Defer; };
}

Policy greedy_policy(const SystemParams& params) {
  return [e_tx = params.e_tx](int b, double) {
    return b >= e_tx ? Action::HighRate : Action::Defer;
  };
}

Policy opportunistic_policy(const SystemParams& params) {
  return [e_sense = params.e_sense](int b, double) {
    return b >= e_sense ? Action::SenseDefer : Action::Defer;
  };
}

ThresholdPolicy single_threshold_policy(const SystemParams& params, const BeliefGrid& grid,
                                        const SolverOptions& options) {
  SolverOptions restricted = options;
  restricted.allowed = ActionSet{Action::Defer, Action::HighRate};
  const ValueTable v = value_iteration(params, grid, restricted);
  return extract_thresholds(extract_policy(v, params), params);
}

}  // namespace ehsense
