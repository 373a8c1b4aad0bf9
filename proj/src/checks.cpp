#include "ehsense/checks.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "ehsense/oracle.hpp"

namespace ehsense {

bool CheckReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* CheckReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string CheckReport::to_text() const {
  std::string out;
  char buf[256];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-24s %s worst_margin=%.6g tol=%.3g battery=%d belief=%.6g",
                  c.name.c_str(), c.passed ? "PASS" : "FAIL", c.worst_margin, c.tolerance,
                  c.worst_battery, c.worst_belief);
    out += buf;
    if (!c.detail.empty()) out += " " + c.detail;
    out += "\n";
  }
  return out;
}

namespace {

// Tracks the minimum slack and where it occurred.
struct Worst {
  double margin = std::numeric_limits<double>::infinity();
  int battery = -1;
  double belief = 0.0;

  void offer(double m, int b, double p) {
    if (m < margin) {
      margin = m;
      battery = b;
      belief = p;
    }
  }

  CheckResult finish(std::string name, double tol) const {
    CheckResult r;
    r.name = std::move(name);
    r.tolerance = tol;
    r.worst_battery = battery;
    r.worst_belief = belief;
    if (battery < 0) {
      r.worst_margin = 0.0;
      r.detail = "no applicable states";
    } else {
      r.worst_margin = margin;
    }
    r.passed = r.worst_margin >= -tol;
    return r;
  }
};

}  // namespace

CheckReport check_lemma_suite(const ValueTable& v, const SystemParams& params,
                              const LemmaTolerances& tol) {
  CheckReport report;
  const int n = v.cols();
  const auto& grid = v.grid();

  Worst convex;
  for (int b = 0; b <= v.b_max(); ++b) {
    const auto row = v.row(b);
    for (int i = 1; i + 1 < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      convex.offer(row[k - 1] - 2.0 * row[k] + row[k + 1], b, grid.point(i));
    }
  }
  report.checks.push_back(convex.finish("convex_in_belief", tol.convexity_per_rate * params.r_high));

  Worst battery;
  for (int b = 0; b < v.b_max(); ++b) {
    for (int i = 0; i < n; ++i) battery.offer(v.value(b + 1, i) - v.value(b, i), b, grid.point(i));
  }
  report.checks.push_back(battery.finish("monotone_in_battery", tol.monotone));

  if (params.lambda1 >= params.lambda0) {
    Worst belief;
    for (int b = 0; b <= v.b_max(); ++b) {
      for (int i = 0; i + 1 < n; ++i)
        belief.offer(v.value(b, i + 1) - v.value(b, i), b, grid.point(i));
    }
    report.checks.push_back(belief.finish("monotone_in_belief", tol.monotone));
  } else {
    CheckResult skipped;
    skipped.name = "monotone_in_belief";
    skipped.detail = "skipped: lambda1 < lambda0";
    report.checks.push_back(skipped);
  }

  Worst gain;
  const double bound = (1.0 - params.tau()) * params.r_high;
  for (int b = 1; b + params.e_saved() <= v.b_max(); ++b) {
    for (int i = 0; i < n; ++i) {
      const double jump = v.value(b + params.e_saved(), i) - v.value(b, i);
      gain.offer(bound - jump, b, grid.point(i));
    }
  }
  report.checks.push_back(gain.finish("saved_energy_gain_bound", tol.gain_bound));
  return report;
}

CheckReport check_good_state_dominance(const ValueTable& v, const SystemParams& params,
                                       const DominanceOptions& options) {
  CheckReport report;
  Worst od, ot;
  double raw_od = std::numeric_limits<double>::infinity();
  double raw_ot = std::numeric_limits<double>::infinity();
  const double scale = (1.0 - params.beta) * (1.0 - params.tau()) * params.r_high;
  for (int b = params.e_tx; b <= v.b_max(); ++b) {
    for (int i = 0; i < v.cols(); ++i) {
      const double p = v.grid().point(i);
      if (options.min_belief > 0.0 && p <= options.min_belief) continue;
      const double floor = p * scale;
      const double d_od = backup_sense_defer(v, b, p, params) -
                          backup_sense_defer_defer(v, b, p, params);
      const double d_ot = backup_sense_transmit(v, b, p, params) -
                          backup_sense_transmit_defer(v, b, p, params);
      raw_od = std::min(raw_od, d_od);
      raw_ot = std::min(raw_ot, d_ot);
      od.offer(d_od - floor, b, p);
      ot.offer(d_ot - floor, b, p);
    }
  }
  auto r_od = od.finish("sense_defer_dominance", options.slack);
  auto r_ot = ot.finish("sense_transmit_dominance", options.slack);
  char buf[64];
  std::snprintf(buf, sizeof buf, "min_difference=%.6g", raw_od);
  if (r_od.worst_battery >= 0) r_od.detail = buf;
  std::snprintf(buf, sizeof buf, "min_difference=%.6g", raw_ot);
  if (r_ot.worst_battery >= 0) r_ot.detail = buf;
  report.checks.push_back(r_od);
  report.checks.push_back(r_ot);
  return report;
}

CheckResult check_threshold_structure(const ValueTable& v, const SystemParams& params,
                                      int max_thresholds) {
  CheckResult r;
  r.name = "threshold_structure";
  try {
    const ThresholdPolicy t = extract_thresholds(extract_policy(v, params), params);
    int most = 0;
    for (int b = 0; b <= t.b_max(); ++b) {
      const int k = t.rows[static_cast<std::size_t>(b)].num_thresholds();
      if (k > most) {
        most = k;
        r.worst_battery = b;
      }
    }
    r.worst_margin = max_thresholds - most;
    r.passed = most <= max_thresholds;
    r.detail = "max_thresholds_per_row=" + std::to_string(most);
  } catch (const StructureViolation& e) {
    r.passed = false;
    r.worst_margin = -1.0;
    r.worst_battery = e.battery();
    r.detail = e.what();
  }
  return r;
}

CheckResult check_oracle_agreement(const SystemParams& params, const BeliefGrid& grid,
                                   int horizon, const std::vector<double>& start_beliefs,
                                   double gap_per_step) {
  CheckResult r;
  r.name = "oracle_agreement";
  const OracleLimits limits;
  if (horizon < 1 || params.b_max > limits.max_b_max ||
      params.num_harvest_levels() > limits.max_harvest_levels ||
      horizon > limits.max_horizon) {
    r.detail = "skipped: instance outside exact-solver limits";
    return r;
  }
  Worst worst;
  double largest_gap = 0.0;
  for (int n = 1; n <= horizon; ++n) {
    const ValueTable table = value_iteration_steps(params, grid, n);
    const double allowed = gap_per_step * grid.step() * n * params.r_high;
    for (double p0 : start_beliefs) {
      const OracleResult res = compare_with_solver(params, table, p0, n, limits);
      largest_gap = std::max(largest_gap, res.max_abs_gap_vs_solver);
      worst.offer(allowed - res.max_abs_gap_vs_solver, res.worst_battery, res.worst_belief);
    }
  }
  r = worst.finish("oracle_agreement", 0.0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "max_gap=%.3g horizon=%d", largest_gap, horizon);
  r.detail = buf;
  return r;
}

}  // namespace ehsense
