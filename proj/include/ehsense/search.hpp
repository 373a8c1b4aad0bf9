#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ehsense/model.hpp"
#include "ehsense/policy.hpp"
#include "ehsense/simulator.hpp"

namespace ehsense {

/// Three breakpoints per battery level for single-rate models:
/// D on [0, r1), O on [r1, r2), D on [r2, r3), H on [r3, 1] (empty when r3 >= 1).
/// Below e_tx only r1, r2 are used and r3 stays 1; below e_sense the row is D.
struct SpecialThresholds {
  std::vector<std::array<double, 3>> rho;  // index = battery level

  bool operator==(const SpecialThresholds&) const = default;
};

/// Throws StructureViolation when a row does not follow the D,O,D,H pattern.
SpecialThresholds to_special(const ThresholdPolicy& policy, const SystemParams& params);
ThresholdPolicy from_special(const SpecialThresholds& thresholds, const SystemParams& params);

struct SearchConfig {
  std::vector<double> candidate_breakpoints;  // sorted, within [0, 1]
  int episodes = 8;
  long horizon = 20000;
  std::uint64_t seed = 1;
  int max_passes = 4;
  int neighborhood = 0;  // candidates tried on each side of the current value; 0 = all
  InitialConditions initial;

  void validate() const;
};

/// Beliefs reachable from either observation reset in up to 20 slots, plus a
/// uniform 0.05 grid, plus both end points.
std::vector<double> default_candidates(const SystemParams& params);

struct SearchLogEntry {
  int pass = 0;
  int battery = 0;
  int threshold = 0;
  double candidate = 0.0;
  double throughput = 0.0;
  bool accepted = false;
};

struct SearchResult {
  ThresholdPolicy policy;
  ThroughputStats stats;          // final policy, search seed
  ThroughputStats initial_stats;  // starting policy, search seed
  std::vector<SearchLogEntry> log;
  int passes = 0;
};

/// Coordinate ascent over the per-battery breakpoints of a single-rate model.
/// Every evaluation reuses the configured seed (common random numbers); a
/// move is kept only if it strictly raises the estimate. Stops after a pass
/// without improvement or after max_passes.
SearchResult search_thresholds(const SystemParams& params, const SearchConfig& config,
                               const ThresholdPolicy& init);

}  // namespace ehsense
