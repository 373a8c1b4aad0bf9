#include "ehsense/belief.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ehsense {

double belief_update_no_obs(double p, const SystemParams& params) {
  return params.lambda0 * (1.0 - p) + params.lambda1 * p;
}

double belief_after_observation(ChannelObservation obs, double p, const SystemParams& params) {
  switch (obs) {
    case ChannelObservation::AckHigh:
    case ChannelObservation::SensedGood: return params.lambda1;
    case ChannelObservation::NackHigh:
    case ChannelObservation::SensedBad: return params.lambda0;
    case ChannelObservation::None: return belief_update_no_obs(p, params);
  }
  return belief_update_no_obs(p, params);
}

double stationary_belief(const SystemParams& params) {
  const double denom = 1.0 - params.lambda1 + params.lambda0;
  if (denom <= 0.0)
    throw ModelError("stationary belief undefined for lambda1 - lambda0 = 1");
  return params.lambda0 / denom;
}

std::vector<double> reachable_beliefs(double p0, int depth, const SystemParams& params) {
  if (depth < 0) throw ModelError("depth must be nonnegative");
  std::vector<double> out;
  for (double start : {p0, params.lambda0, params.lambda1}) {
    double p = start;
    for (int k = 0; k <= depth; ++k) {
      out.push_back(p);
      p = belief_update_no_obs(p, params);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
            out.end());
  return out;
}

BeliefGrid::BeliefGrid(int resolution) {
  if (resolution < 2)
    throw ModelError("belief grid needs at least 2 points (got " + std::to_string(resolution) + ")");
  points_.resize(static_cast<std::size_t>(resolution));
  const double denom = static_cast<double>(resolution - 1);
  for (int i = 0; i < resolution; ++i) points_[static_cast<std::size_t>(i)] = i / denom;
  step_ = 1.0 / denom;
}

GridLocation BeliefGrid::locate(double p) const {
  const int n = size();
  const double x = std::clamp(p, 0.0, 1.0) * (n - 1);
  int i = static_cast<int>(std::floor(x));
  double w = x - i;
  if (w < kSnap) {
    w = 0.0;
  } else if (w > 1.0 - kSnap) {
    ++i;
    w = 0.0;
  }
  if (i >= n - 1) {
    i = n - 2;
    w = 1.0;
  }
  return {i, w};
}

int BeliefGrid::nearest(double p) const {
  const auto loc = locate(p);
  return loc.weight > 0.5 ? loc.index + 1 : loc.index;
}

double BeliefGrid::interpolate(std::span<const double> row, double p) const {
  const auto loc = locate(p);
  const auto i = static_cast<std::size_t>(loc.index);
  return row[i] * (1.0 - loc.weight) + row[i + 1] * loc.weight;
}

}  // namespace ehsense
