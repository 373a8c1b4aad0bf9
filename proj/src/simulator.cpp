#include "ehsense/simulator.hpp"

#include <cmath>
#include <string>

#include "ehsense/belief.hpp"

namespace ehsense {

EpisodeRng::EpisodeRng(std::uint64_t seed, std::uint64_t episode) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(episode),
                    static_cast<std::uint32_t>(episode >> 32)};
  engine_.seed(seq);
}

namespace {

int sample_harvest(const SystemParams& params, double u) {
  double cumulative = 0.0;
  const int last = params.num_harvest_levels() - 1;
  for (int m = 0; m < last; ++m) {
    cumulative += params.energy_pmf[static_cast<std::size_t>(m)];
    if (u < cumulative) return m;
  }
  // Rounding in the cumulative sum must not push mass onto a zero-probability tail.
  for (int m = last; m > 0; --m) {
    if (params.energy_pmf[static_cast<std::size_t>(m)] > 0.0) return m;
  }
  return 0;
}

SimState initial_state(const SystemParams& params, const InitialConditions& init,
                       EpisodeRng& rng) {
  if (init.battery < 0 || init.battery > params.b_max)
    throw ModelError("initial battery outside [0, b_max]");
  const double good = init.good_probability ? *init.good_probability : stationary_belief(params);
  const double belief = init.belief ? *init.belief : stationary_belief(params);
  SimState s;
  s.battery = init.battery;
  s.belief = belief;
  s.channel_good = rng.uniform() < good;
  return s;
}

struct EpisodeTotals {
  double bits = 0.0;
  double discounted = 0.0;
};

EpisodeTotals play(const Policy& policy, const SystemParams& params, SimState s, long horizon,
                   EpisodeRng& rng, EpisodeTrace* trace) {
  EpisodeTotals totals;
  double weight = 1.0;
  for (long t = 0; t < horizon; ++t) {
    const Action a = policy(s.battery, s.belief);
    StepResult r = step(s, a, rng, params);
    totals.bits += r.record.bits;
    totals.discounted += weight * r.record.bits;
    weight *= params.beta;
    if (trace != nullptr) {
      r.record.slot = t;
      trace->slots.push_back(r.record);
    }
    s = r.next;
  }
  return totals;
}

void mean_and_error(const std::vector<double>& xs, double& mean, double& err) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / n;
  if (xs.size() < 2) {
    err = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  err = std::sqrt(ss / (n - 1.0) / n);
}

void check_run(const RunConfig& config) {
  if (config.episodes < 1) throw ModelError("episodes must be >= 1");
  if (config.horizon < 1) throw ModelError("horizon must be >= 1");
}

}  // namespace

StepResult step(const SimState& state, Action action, EpisodeRng& rng,
                const SystemParams& params) {
  if (!is_feasible(action, state.battery, params)) {
    throw InfeasibleAction(std::string(action_label(action)) + " chosen at battery " +
                           std::to_string(state.battery));
  }
  StepResult r;
  r.record.channel_good = state.channel_good;
  r.record.battery = state.battery;
  r.record.belief = state.belief;
  r.record.action = action;
  r.record.bits = slot_bits(action, state.battery, state.channel_good, params);
  r.record.observation = observe(action, state.channel_good);
  r.record.harvest = sample_harvest(params, rng.uniform());
  r.record.battery_next =
      next_battery(state.battery, r.record.harvest, action, state.channel_good, params);

  const double stay_good = state.channel_good ? params.lambda1 : params.lambda0;
  r.next.battery = r.record.battery_next;
  r.next.belief = belief_after_observation(r.record.observation, state.belief, params);
  r.next.channel_good = rng.uniform() < stay_good;
  return r;
}

ThroughputStats run_episodes(const Policy& policy, const SystemParams& params,
                             const RunConfig& config) {
  check_run(config);
  std::vector<double> per_episode(static_cast<std::size_t>(config.episodes));
  for (int e = 0; e < config.episodes; ++e) {
    EpisodeRng rng(config.seed, static_cast<std::uint64_t>(e));
    const SimState s0 = initial_state(params, config.initial, rng);
    const auto totals = play(policy, params, s0, config.horizon, rng, nullptr);
    per_episode[static_cast<std::size_t>(e)] = totals.bits / static_cast<double>(config.horizon);
  }
  ThroughputStats stats;
  mean_and_error(per_episode, stats.mean_bits_per_slot, stats.std_error);
  stats.episodes = config.episodes;
  stats.horizon = config.horizon;
  stats.seed = config.seed;
  return stats;
}

DiscountedStats run_discounted(const Policy& policy, const SystemParams& params, int b0,
                               double p0, const RunConfig& config) {
  check_run(config);
  InitialConditions init;
  init.battery = b0;
  init.belief = p0;
  init.good_probability = p0;
  std::vector<double> returns(static_cast<std::size_t>(config.episodes));
  for (int e = 0; e < config.episodes; ++e) {
    EpisodeRng rng(config.seed, static_cast<std::uint64_t>(e));
    const SimState s0 = initial_state(params, init, rng);
    returns[static_cast<std::size_t>(e)] =
        play(policy, params, s0, config.horizon, rng, nullptr).discounted;
  }
  DiscountedStats stats;
  mean_and_error(returns, stats.mean, stats.std_error);
  return stats;
}

EpisodeTrace record_episode(const Policy& policy, const SystemParams& params, long horizon,
                            std::uint64_t seed, std::uint64_t episode,
                            const InitialConditions& initial) {
  if (horizon < 1) throw ModelError("horizon must be >= 1");
  EpisodeRng rng(seed, episode);
  const SimState s0 = initial_state(params, initial, rng);
  EpisodeTrace trace;
  trace.slots.reserve(static_cast<std::size_t>(horizon));
  play(policy, params, s0, horizon, rng, &trace);
  return trace;
}

bool energy_audit(const EpisodeTrace& trace, const SystemParams& params) {
  for (std::size_t t = 0; t < trace.slots.size(); ++t) {
    const auto& s = trace.slots[t];
    if (t > 0 && trace.slots[t - 1].battery_next != s.battery) return false;
    try {
      if (next_battery(s.battery, s.harvest, s.action, s.channel_good, params) != s.battery_next)
        return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

}  // namespace ehsense
