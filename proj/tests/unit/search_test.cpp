#include <gtest/gtest.h>

#include "ehsense/search.hpp"
#include "ehsense/solver.hpp"
#include "fixtures.hpp"

using namespace ehsense;
using ehsense::testing::fig2_params;
using ehsense::testing::throughput_params;

namespace {

SearchConfig quick_search(std::vector<double> candidates) {
  SearchConfig sc;
  sc.candidate_breakpoints = std::move(candidates);
  sc.episodes = 2;
  sc.horizon = 3000;
  sc.seed = 4;
  sc.max_passes = 3;
  return sc;
}

ThresholdPolicy uniform_special(const SystemParams& p, std::array<double, 3> r) {
  SpecialThresholds s;
  s.rho.assign(static_cast<std::size_t>(p.b_max + 1), r);
  return from_special(s, p);
}

}  // namespace

TEST(Special, RoundTripsSolvedPolicy) {
  const auto p = fig2_params();
  const auto th =
      extract_thresholds(extract_policy(value_iteration(p, BeliefGrid(1001)), p), p);
  const auto special = to_special(th, p);
  EXPECT_EQ(from_special(special, p), th);
}

TEST(Special, BuildsRows) {
  const auto p = fig2_params();
  const auto th = uniform_special(p, {0.2, 0.4, 0.7});
  EXPECT_EQ(th.rows[0].labels, std::vector<Action>{Action::Defer});
  EXPECT_EQ(th.rows[1].labels, std::vector<Action>{Action::Defer});
  EXPECT_EQ(th.rows[5].labels, (std::vector<Action>{Action::Defer, Action::SenseDefer, Action::Defer}));
  EXPECT_EQ(th.rows[5].breakpoints, (std::vector<double>{0.0, 0.2, 0.4, 1.0}));
  EXPECT_EQ(th.rows[20].labels, (std::vector<Action>{Action::Defer, Action::SenseDefer,
                                                     Action::Defer, Action::HighRate}));
  const auto no_sense = uniform_special(p, {0.6, 0.6, 0.6});
  EXPECT_EQ(no_sense.rows[20].labels, (std::vector<Action>{Action::Defer, Action::HighRate}));
  EXPECT_EQ(no_sense.rows[5].labels, std::vector<Action>{Action::Defer});

  SpecialThresholds bad;
  bad.rho.assign(51, {0.5, 0.4, 0.9});
  EXPECT_THROW(from_special(bad, p), StructureViolation);
}

TEST(Special, RejectsTwoRateModels) {
  auto p = fig2_params();
  p.r_low = 1.0;
  ThresholdPolicy th;
  th.rows.resize(51);
  EXPECT_THROW(to_special(th, p), ModelError);
}

TEST(Search, SingleCandidateKeepsInit) {
  const auto p = throughput_params(0.5, 1);
  const auto init = uniform_special(p, {0.5, 0.5, 0.5});
  const auto res = search_thresholds(p, quick_search({0.5}), init);
  EXPECT_EQ(res.policy, init);
  for (const auto& e : res.log) EXPECT_FALSE(e.accepted);
  EXPECT_EQ(res.stats.mean_bits_per_slot, res.initial_stats.mean_bits_per_slot);
}

TEST(Search, NeverWorseOnItsOwnSeed) {
  const auto p = throughput_params(0.5, 1);
  const auto init = uniform_special(p, {0.3, 0.6, 0.9});
  auto sc = quick_search({0.0, 0.25, 0.5, 0.75, 1.0});
  sc.neighborhood = 1;
  const auto res = search_thresholds(p, sc, init);
  EXPECT_GE(res.stats.mean_bits_per_slot, res.initial_stats.mean_bits_per_slot);
  const auto again = run_episodes(threshold_policy(res.policy), p,
                                  {sc.episodes, sc.horizon, sc.seed, sc.initial});
  EXPECT_EQ(again.mean_bits_per_slot, res.stats.mean_bits_per_slot);
  int accepted = 0;
  for (const auto& e : res.log) accepted += e.accepted ? 1 : 0;
  EXPECT_EQ(accepted > 0, !(res.policy == init));
}

TEST(Search, ConstantBeliefSettlesQuickly) {
  auto p = throughput_params(0.5, 1);
  p.lambda0 = p.lambda1 = 0.6;
  const auto init = uniform_special(p, {0.5, 0.5, 0.5});
  const auto res = search_thresholds(p, quick_search({0.0, 0.5, 1.0}), init);
  EXPECT_LE(res.passes, 2);
}

TEST(Search, ValidatesConfig) {
  const auto p = throughput_params(0.5, 1);
  const auto init = uniform_special(p, {0.5, 0.5, 0.5});
  EXPECT_THROW(search_thresholds(p, quick_search({}), init), ModelError);
  EXPECT_THROW(search_thresholds(p, quick_search({0.6, 0.2}), init), ModelError);
  EXPECT_THROW(search_thresholds(p, quick_search({-0.1, 0.2}), init), ModelError);
}

TEST(Search, DefaultCandidatesSortedInRange) {
  const auto c = default_candidates(fig2_params());
  ASSERT_FALSE(c.empty());
  EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
  EXPECT_GE(c.front(), 0.0);
  EXPECT_LE(c.back(), 1.0);
}
