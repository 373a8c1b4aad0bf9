#include "ehsense/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ehsense {

std::string_view action_label(Action a) {
  switch (a) {
    case Action::Defer: return "D";
    case Action::LowRate: return "L";
    case Action::SenseDefer: return "OD";
    case Action::SenseTransmit: return "OT";
    case Action::HighRate: return "H";
  }
  return "?";
}

Action parse_action(std::string_view label) {
  if (label == "D") return Action::Defer;
  if (label == "L") return Action::LowRate;
  if (label == "OD" || label == "O") return Action::SenseDefer;
  if (label == "OT") return Action::SenseTransmit;
  if (label == "H") return Action::HighRate;
  throw ModelError("unknown action label '" + std::string(label) + "'");
}

std::string_view observation_label(ChannelObservation o) {
  switch (o) {
    case ChannelObservation::None: return "none";
    case ChannelObservation::AckHigh: return "ack";
    case ChannelObservation::NackHigh: return "nack";
    case ChannelObservation::SensedGood: return "sensed_good";
    case ChannelObservation::SensedBad: return "sensed_bad";
  }
  return "?";
}

namespace {

bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

void SystemParams::validate() const {
  if (!is_probability(lambda0) || !is_probability(lambda1))
    throw ModelError("lambda0 and lambda1 must lie in [0, 1]");
  if (energy_pmf.empty()) throw ModelError("energy_pmf must not be empty");
  for (double q : energy_pmf) {
    if (!std::isfinite(q) || q < 0.0) throw ModelError("energy_pmf entries must be >= 0");
  }
  const double total = std::accumulate(energy_pmf.begin(), energy_pmf.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12)
    throw ModelError("energy_pmf must sum to 1 (got " + std::to_string(total) + ")");
  if (b_max < 0) throw ModelError("b_max must be nonnegative");
  if (e_sense <= 0) throw ModelError("e_sense must be a positive number of quanta");
  if (e_sense >= e_tx) throw ModelError("e_sense must be smaller than e_tx");
  if (e_tx > b_max) throw ModelError("e_tx must not exceed b_max");
  if (!std::isfinite(r_low) || r_low < 0.0) throw ModelError("r_low must be >= 0");
  if (!std::isfinite(r_high) || r_high <= 0.0) throw ModelError("r_high must be > 0");
  if (r_low >= r_high) throw ModelError("r_low must be smaller than r_high");
  if (!std::isfinite(beta) || beta < 0.0 || beta >= 1.0)
    throw ModelError("beta must lie in [0, 1)");
}

std::vector<double> two_point_pmf(int amount, double q) {
  if (amount < 0) throw ModelError("harvest amount must be nonnegative");
  if (!is_probability(q)) throw ModelError("harvest probability must lie in [0, 1]");
  std::vector<double> pmf(static_cast<std::size_t>(amount) + 1, 0.0);
  if (amount == 0) {
    pmf[0] = 1.0;
  } else {
    pmf[0] = 1.0 - q;
    pmf[static_cast<std::size_t>(amount)] = q;
  }
  return pmf;
}

std::vector<HarvestAtom> harvest_support(const SystemParams& params) {
  std::vector<HarvestAtom> atoms;
  for (int m = 0; m < params.num_harvest_levels(); ++m) {
    const double q = params.energy_pmf[static_cast<std::size_t>(m)];
    if (q > 0.0) atoms.push_back({m, q});
  }
  return atoms;
}

bool is_feasible(Action a, int battery, const SystemParams& params) {
  switch (a) {
    case Action::Defer: return true;
    case Action::HighRate: return battery >= params.e_tx;
    case Action::LowRate:
    case Action::SenseTransmit: return battery >= params.e_tx && !params.single_rate();
    case Action::SenseDefer: return battery >= params.e_sense;
  }
  return false;
}

ActionSet feasible_actions(int battery, const SystemParams& params) {
  ActionSet set;
  for (Action a : kAllActions) {
    if (is_feasible(a, battery, params)) set.insert(a);
  }
  return set;
}

double expected_reward(const SystemState& state, Action a, const SystemParams& params) {
  if (state.battery < params.e_tx) return 0.0;  // only D or sense-only remain
  if (!is_feasible(a, state.battery, params)) return 0.0;
  const double p = state.belief;
  const double keep = 1.0 - params.tau();
  switch (a) {
    case Action::Defer: return 0.0;
    case Action::LowRate: return params.r_low;
    case Action::HighRate: return p * params.r_high;
    case Action::SenseDefer: return keep * p * params.r_high;
    case Action::SenseTransmit:
      return keep * ((1.0 - p) * params.r_low + p * params.r_high);
  }
  return 0.0;
}

double slot_bits(Action a, int battery, bool channel_good, const SystemParams& params) {
  if (!is_feasible(a, battery, params)) return 0.0;
  const double keep = 1.0 - params.tau();
  switch (a) {
    case Action::Defer: return 0.0;
    case Action::LowRate: return params.r_low;
    case Action::HighRate: return channel_good ? params.r_high : 0.0;
    case Action::SenseDefer:
      return (channel_good && battery >= params.e_tx) ? keep * params.r_high : 0.0;
    case Action::SenseTransmit:
      return keep * (channel_good ? params.r_high : params.r_low);
  }
  return 0.0;
}

int energy_spent(Action a, int battery, bool channel_good, const SystemParams& params) {
  if (!is_feasible(a, battery, params)) {
    throw InfeasibleAction(std::string(action_label(a)) + " is infeasible at battery " +
                           std::to_string(battery));
  }
  switch (a) {
    case Action::Defer: return 0;
    case Action::LowRate:
    case Action::HighRate:
    case Action::SenseTransmit: return params.e_tx;
    case Action::SenseDefer:
      if (battery < params.e_tx) return params.e_sense;
      return channel_good ? params.e_tx : params.e_sense;
  }
  return 0;
}

int next_battery(int battery, int harvest, Action a, bool channel_good,
                 const SystemParams& params) {
  if (battery < 0 || battery > params.b_max)
    throw ModelError("battery " + std::to_string(battery) + " outside [0, b_max]");
  if (harvest < 0 || harvest >= params.num_harvest_levels())
    throw ModelError("harvest " + std::to_string(harvest) + " outside the pmf support");
  const int spent = energy_spent(a, battery, channel_good, params);
  return std::min(battery + harvest - spent, params.b_max);
}

ChannelObservation observe(Action a, bool channel_good) {
  switch (a) {
    case Action::Defer:
    case Action::LowRate: return ChannelObservation::None;
    case Action::HighRate:
      return channel_good ? ChannelObservation::AckHigh : ChannelObservation::NackHigh;
    case Action::SenseDefer:
    case Action::SenseTransmit:
      return channel_good ? ChannelObservation::SensedGood : ChannelObservation::SensedBad;
  }
  return ChannelObservation::None;
}

}  // namespace ehsense
