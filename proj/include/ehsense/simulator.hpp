#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ehsense/model.hpp"
#include "ehsense/policy.hpp"

namespace ehsense {

/// Uniform variates for one episode. The stream is a function of
/// (seed, episode) only, so episodes can run in any order and every policy
/// evaluated with the same seed sees the same channel and harvest draws.
class EpisodeRng {
 public:
  EpisodeRng(std::uint64_t seed, std::uint64_t episode);
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// True channel of the current slot plus what the transmitter knows.
struct SimState {
  int battery = 0;
  double belief = 0.0;
  bool channel_good = false;
};

struct SlotRecord {
  long slot = 0;
  bool channel_good = false;
  int harvest = 0;
  int battery = 0;
  double belief = 0.0;
  Action action = Action::Defer;
  ChannelObservation observation = ChannelObservation::None;
  double bits = 0.0;
  int battery_next = 0;
};

struct EpisodeTrace {
  std::vector<SlotRecord> slots;
};

struct StepResult {
  SimState next;
  SlotRecord record;
};

/// Plays one slot: acts on the current channel, collects the harvest at the
/// end of the slot, then draws the next slot's channel from the chain.
/// Two uniforms are consumed per slot (harvest, then channel) whatever the
/// action. Throws InfeasibleAction.
StepResult step(const SimState& state, Action action, EpisodeRng& rng,
                const SystemParams& params);

/// Start-of-episode conditions; unset fields fall back to the stationary
/// channel law and the stationary belief.
struct InitialConditions {
  int battery = 0;
  std::optional<double> belief;
  std::optional<double> good_probability;
};

struct RunConfig {
  int episodes = 30;
  long horizon = 100000;
  std::uint64_t seed = 1;
  InitialConditions initial;
};

struct ThroughputStats {
  double mean_bits_per_slot = 0.0;
  double std_error = 0.0;
  int episodes = 0;
  long horizon = 0;
  std::uint64_t seed = 0;
};

/// Time-averaged bits per slot; standard error across episode means.
ThroughputStats run_episodes(const Policy& policy, const SystemParams& params,
                             const RunConfig& config);

struct DiscountedStats {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of the beta-discounted return from (b0, p0), with the
/// first channel state drawn with probability p0 of GOOD.
DiscountedStats run_discounted(const Policy& policy, const SystemParams& params, int b0,
                               double p0, const RunConfig& config);

EpisodeTrace record_episode(const Policy& policy, const SystemParams& params, long horizon,
                            std::uint64_t seed, std::uint64_t episode,
                            const InitialConditions& initial = {});

/// True iff every logged transition follows the battery recursion and each
/// slot starts with the previous slot's next battery.
bool energy_audit(const EpisodeTrace& trace, const SystemParams& params);

}  // namespace ehsense
