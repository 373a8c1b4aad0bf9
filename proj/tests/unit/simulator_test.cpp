#include <gtest/gtest.h>

#include <cmath>

#include "ehsense/belief.hpp"
#include "ehsense/simulator.hpp"
#include "fixtures.hpp"

using namespace ehsense;
using ehsense::testing::fig2_params;

namespace {

SystemParams always_good() {
  SystemParams p = fig2_params();
  p.lambda0 = p.lambda1 = 1.0;
  p.energy_pmf = two_point_pmf(10, 1.0);
  return p;
}

RunConfig small_run(long horizon = 2000, int episodes = 3) {
  RunConfig rc;
  rc.episodes = episodes;
  rc.horizon = horizon;
  rc.seed = 11;
  return rc;
}

}  // namespace

TEST(Rng, DeterministicPerEpisode) {
  EpisodeRng a(3, 7), b(3, 7), c(3, 8);
  for (int k = 0; k < 10; ++k) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NE(EpisodeRng(3, 7).uniform(), c.uniform());
}

TEST(Step, HighRateOnBad) {
  auto p = fig2_params();
  p.lambda0 = 0.0;
  p.lambda1 = 0.0;
  EpisodeRng rng(1, 0);
  const auto r = step({20, 0.3, false}, Action::HighRate, rng, p);
  EXPECT_EQ(r.record.bits, 0.0);
  EXPECT_EQ(r.record.observation, ChannelObservation::NackHigh);
  EXPECT_EQ(r.next.belief, p.lambda0);
  EXPECT_EQ(r.next.battery, 10 + r.record.harvest);
}

TEST(Step, LowRateAlwaysDelivers) {
  auto p = fig2_params();
  p.r_low = 1.0;
  EpisodeRng rng(1, 0);
  const auto r = step({20, 0.3, false}, Action::LowRate, rng, p);
  EXPECT_EQ(r.record.bits, 1.0);
  EXPECT_EQ(r.record.observation, ChannelObservation::None);
  EXPECT_DOUBLE_EQ(r.next.belief, belief_update_no_obs(0.3, p));
}

TEST(Step, SenseOnBadSavesEnergy) {
  auto p = fig2_params();
  p.energy_pmf = {1.0};
  EpisodeRng rng(1, 0);
  const auto r = step({10, 0.5, false}, Action::SenseDefer, rng, p);
  EXPECT_EQ(r.record.bits, 0.0);
  EXPECT_EQ(r.next.battery, 8);
  EXPECT_EQ(r.record.observation, ChannelObservation::SensedBad);
}

TEST(Step, InfeasibleThrows) {
  EpisodeRng rng(1, 0);
  EXPECT_THROW(step({5, 0.5, true}, Action::HighRate, rng, fig2_params()), InfeasibleAction);
}

TEST(Throughput, DeferIsZero) {
  const auto s = run_episodes(defer_policy(), fig2_params(), small_run());
  EXPECT_EQ(s.mean_bits_per_slot, 0.0);
  EXPECT_EQ(s.std_error, 0.0);
}

TEST(Throughput, NoHarvestIsZero) {
  auto p = fig2_params();
  p.energy_pmf = {1.0};
  EXPECT_EQ(run_episodes(greedy_policy(p), p, small_run()).mean_bits_per_slot, 0.0);
  EXPECT_EQ(run_episodes(opportunistic_policy(p), p, small_run()).mean_bits_per_slot, 0.0);
}

TEST(Throughput, AlwaysGoodGreedyAndOpportunistic) {
  const auto p = always_good();
  RunConfig rc = small_run();
  rc.initial.battery = p.e_tx;
  EXPECT_DOUBLE_EQ(run_episodes(greedy_policy(p), p, rc).mean_bits_per_slot, p.r_high);
  EXPECT_DOUBLE_EQ(run_episodes(opportunistic_policy(p), p, rc).mean_bits_per_slot,
                   (1.0 - p.tau()) * p.r_high);
}

TEST(Throughput, CommonRandomNumbersAndDeterminism) {
  const auto p = fig2_params();
  const auto a = run_episodes(greedy_policy(p), p, small_run());
  const auto b = run_episodes(greedy_policy(p), p, small_run());
  EXPECT_EQ(a.mean_bits_per_slot, b.mean_bits_per_slot);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_GT(a.mean_bits_per_slot, 0.0);
  EXPECT_EQ(a.episodes, 3);

  // Channel and harvest paths do not depend on the policy.
  const auto t1 = record_episode(greedy_policy(p), p, 300, 5, 0);
  const auto t2 = record_episode(defer_policy(), p, 300, 5, 0);
  for (std::size_t k = 0; k < t1.slots.size(); ++k) {
    EXPECT_EQ(t1.slots[k].channel_good, t2.slots[k].channel_good);
    EXPECT_EQ(t1.slots[k].harvest, t2.slots[k].harvest);
  }
}

TEST(Throughput, RejectsBadConfig) {
  RunConfig rc = small_run();
  rc.episodes = 0;
  EXPECT_THROW(run_episodes(defer_policy(), fig2_params(), rc), ModelError);
}

TEST(Audit, TracesBalance) {
  const auto p = fig2_params();
  auto trace = record_episode(opportunistic_policy(p), p, 500, 9, 1);
  EXPECT_TRUE(energy_audit(trace, p));
  trace.slots[100].battery_next += 1;
  EXPECT_FALSE(energy_audit(trace, p));
}

TEST(Audit, HandBuiltTrace) {
  const auto p = fig2_params();
  EpisodeTrace t;
  SlotRecord s0;
  s0.slot = 0;
  s0.battery = 0;
  s0.harvest = 10;
  s0.action = Action::Defer;
  s0.battery_next = 10;
  SlotRecord s1;
  s1.slot = 1;
  s1.battery = 10;
  s1.channel_good = false;
  s1.action = Action::SenseDefer;
  s1.observation = ChannelObservation::SensedBad;
  s1.harvest = 0;
  s1.battery_next = 8;
  SlotRecord s2;
  s2.slot = 2;
  s2.battery = 8;
  s2.channel_good = true;
  s2.action = Action::SenseDefer;
  s2.observation = ChannelObservation::SensedGood;
  s2.harvest = 10;
  s2.battery_next = 16;
  t.slots = {s0, s1, s2};
  EXPECT_TRUE(energy_audit(t, p));
}

TEST(Discounted, MatchesValueForFixedPolicyRoughly) {
  // Greedy from a full battery on an always-GOOD channel earns R2 every slot.
  const auto p = always_good();
  RunConfig rc = small_run(400, 2);
  const auto d = run_discounted(greedy_policy(p), p, p.e_tx, 1.0, rc);
  EXPECT_NEAR(d.mean, p.r_high * (1 - std::pow(p.beta, 400)) / (1 - p.beta), 1e-9);
}
