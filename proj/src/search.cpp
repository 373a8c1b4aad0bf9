#include "ehsense/search.hpp"

#include <algorithm>
#include <cmath>

#include "ehsense/belief.hpp"

namespace ehsense {

namespace {

std::size_t at(int b) { return static_cast<std::size_t>(b); }

int thresholds_at(int b, const SystemParams& params) {
  if (b < params.e_sense) return 0;
  return b < params.e_tx ? 2 : 3;
}

bool ordered(const std::array<double, 3>& r) { return r[0] <= r[1] && r[1] <= r[2]; }

}  // namespace

SpecialThresholds to_special(const ThresholdPolicy& policy, const SystemParams& params) {
  if (!params.single_rate()) throw ModelError("threshold search needs a single-rate model");
  if (policy.b_max() != params.b_max) throw ModelError("threshold policy does not match b_max");
  SpecialThresholds out;
  out.rho.resize(at(params.b_max + 1), {1.0, 1.0, 1.0});
  for (int b = 0; b <= params.b_max; ++b) {
    const auto& row = policy.rows[at(b)];
    if (auto err = row_structure_error(row, b, params); !err.empty())
      throw StructureViolation(b, err);
    double o_start = -1.0, o_end = -1.0, h_start = 1.0;
    for (std::size_t k = 0; k < row.labels.size(); ++k) {
      const double lo = row.breakpoints[k];
      const double hi = row.breakpoints[k + 1];
      if (row.labels[k] == Action::SenseDefer) {
        o_start = lo;
        o_end = hi;
      } else if (row.labels[k] == Action::HighRate) {
        h_start = lo;
      }
    }
    auto& r = out.rho[at(b)];
    if (o_start >= 0.0) {
      r = {o_start, o_end, h_start};
    } else {
      r = {h_start, h_start, h_start};
    }
  }
  return out;
}

ThresholdPolicy from_special(const SpecialThresholds& thresholds, const SystemParams& params) {
  if (static_cast<int>(thresholds.rho.size()) != params.b_max + 1)
    throw ModelError("threshold vector does not match b_max");
  ThresholdPolicy out;
  out.rows.resize(at(params.b_max + 1));
  for (int b = 0; b <= params.b_max; ++b) {
    const int k = thresholds_at(b, params);
    auto r = thresholds.rho[at(b)];
    if (k < 3) r[2] = 1.0;
    if (!ordered(r)) throw StructureViolation(b, "breakpoints are not ordered");
    struct Piece {
      double lo, hi;
      Action label;
    };
    std::vector<Piece> pieces;
    if (k == 0) {
      pieces.push_back({0.0, 1.0, Action::Defer});
    } else {
      pieces.push_back({0.0, r[0], Action::Defer});
      pieces.push_back({r[0], r[1], Action::SenseDefer});
      pieces.push_back({r[1], r[2], Action::Defer});
      pieces.push_back({r[2], 1.0, k == 3 ? Action::HighRate : Action::Defer});
    }
    ThresholdRow row;
    row.breakpoints = {0.0};
    row.labels.clear();
    for (const auto& piece : pieces) {
      if (!(piece.hi > piece.lo)) continue;
      if (!row.labels.empty() && row.labels.back() == piece.label) {
        row.breakpoints.back() = piece.hi;
        continue;
      }
      if (!row.labels.empty()) row.breakpoints.back() = piece.lo;
      row.labels.push_back(piece.label);
      row.breakpoints.push_back(piece.hi);
    }
    out.rows[at(b)] = std::move(row);
  }
  return out;
}

void SearchConfig::validate() const {
  if (candidate_breakpoints.empty()) throw ModelError("search needs at least one candidate");
  if (!std::is_sorted(candidate_breakpoints.begin(), candidate_breakpoints.end()))
    throw ModelError("candidate breakpoints must be sorted");
  if (candidate_breakpoints.front() < 0.0 || candidate_breakpoints.back() > 1.0)
    throw ModelError("candidate breakpoints must lie in [0, 1]");
  if (episodes < 1 || horizon < 1) throw ModelError("search needs episodes * horizon > 0");
  if (max_passes < 1) throw ModelError("max_passes must be >= 1");
  if (neighborhood < 0) throw ModelError("neighborhood must be >= 0");
}

std::vector<double> default_candidates(const SystemParams& params) {
  std::vector<double> c;
  for (double start : {params.lambda0, params.lambda1}) {
    double p = start;
    for (int k = 0; k <= 20; ++k) {
      c.push_back(p);
      p = belief_update_no_obs(p, params);
    }
  }
  for (int i = 0; i <= 20; ++i) c.push_back(0.05 * i);
  for (double& x : c) x = std::clamp(x, 0.0, 1.0);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end(),
                      [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
          c.end());
  return c;
}

SearchResult search_thresholds(const SystemParams& params, const SearchConfig& config,
                               const ThresholdPolicy& init) {
  config.validate();
  SpecialThresholds current = to_special(init, params);
  RunConfig run;
  run.episodes = config.episodes;
  run.horizon = config.horizon;
  run.seed = config.seed;
  run.initial = config.initial;

  auto evaluate = [&](const SpecialThresholds& t) {
    return run_episodes(threshold_policy(from_special(t, params)), params, run);
  };

  SearchResult result;
  result.initial_stats = evaluate(current);
  ThroughputStats best_stats = result.initial_stats;

  for (int pass = 1; pass <= config.max_passes; ++pass) {
    result.passes = pass;
    bool improved = false;
    for (int b = 0; b <= params.b_max; ++b) {
      for (int j = 0; j < thresholds_at(b, params); ++j) {
        std::size_t accepted_entry = 0;
        bool moved = false;
        const double now = current.rho[at(b)][static_cast<std::size_t>(j)];
        double best_value = now;
        const auto& all = config.candidate_breakpoints;
        auto first = all.begin();
        auto last = all.end();
        if (config.neighborhood > 0) {
          const auto pos = std::lower_bound(all.begin(), all.end(), now) - all.begin();
          const auto k = static_cast<std::ptrdiff_t>(config.neighborhood);
          const auto size = static_cast<std::ptrdiff_t>(all.size());
          first = all.begin() + std::max<std::ptrdiff_t>(0, pos - k);
          // When `now` is itself a candidate it sits at pos and is skipped below.
          const bool on_candidate = pos < size && all[static_cast<std::size_t>(pos)] == now;
          last = all.begin() + std::min(size, pos + k + (on_candidate ? 1 : 0));
        }
        for (auto it = first; it != last; ++it) {
          const double c = *it;
          if (c == now) continue;
          SpecialThresholds trial = current;
          auto& r = trial.rho[at(b)];
          r[static_cast<std::size_t>(j)] = c;
          if (thresholds_at(b, params) < 3) r[2] = 1.0;
          if (!ordered(r)) continue;
          const ThroughputStats s = evaluate(trial);
          result.log.push_back({pass, b, j, c, s.mean_bits_per_slot, false});
          if (s.mean_bits_per_slot > best_stats.mean_bits_per_slot) {
            best_stats = s;
            best_value = c;
            accepted_entry = result.log.size() - 1;
            moved = true;
          }
        }
        if (moved) {
          current.rho[at(b)][static_cast<std::size_t>(j)] = best_value;
          result.log[accepted_entry].accepted = true;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  result.policy = from_special(current, params);
  result.stats = best_stats;
  return result;
}

}  // namespace ehsense
