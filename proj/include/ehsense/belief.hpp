#pragma once

#include <span>
#include <vector>

#include "ehsense/model.hpp"

namespace ehsense {

/// One-step belief propagation when the slot reveals nothing about the channel.
double belief_update_no_obs(double p, const SystemParams& params);

/// Next-slot belief after the observation produced by the taken action.
double belief_after_observation(ChannelObservation obs, double p, const SystemParams& params);

/// Fixed point of the no-observation update. Throws ModelError when
/// lambda1 - lambda0 == 1 (the chain never mixes).
double stationary_belief(const SystemParams& params);

/// {p0, lambda0, lambda1} closed under up to `depth` no-observation updates,
/// sorted and deduplicated within 1e-12.
std::vector<double> reachable_beliefs(double p0, int depth, const SystemParams& params);

/// Position of a belief between two neighbouring grid points. Values within
/// kSnap of a grid point are snapped onto it so lookups there are exact.
struct GridLocation {
  int index = 0;        // left neighbour, in [0, size - 2]
  double weight = 0.0;  // weight of index + 1
};

/// Uniform discretization of [0, 1] including both end points.
class BeliefGrid {
 public:
  static constexpr int kDefaultResolution = 1001;
  static constexpr double kSnap = 1e-9;

  explicit BeliefGrid(int resolution = kDefaultResolution);

  int size() const { return static_cast<int>(points_.size()); }
  double step() const { return step_; }
  double point(int i) const { return points_[static_cast<std::size_t>(i)]; }
  std::span<const double> points() const { return points_; }

  GridLocation locate(double p) const;
  /// Index of the grid point closest to p.
  int nearest(double p) const;
  /// Linear interpolation of `row` (one value per grid point) at belief p.
  double interpolate(std::span<const double> row, double p) const;

  bool operator==(const BeliefGrid& o) const { return points_.size() == o.points_.size(); }

 private:
  std::vector<double> points_;
  double step_;
};

}  // namespace ehsense
