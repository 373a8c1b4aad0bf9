#include <gtest/gtest.h>

#include <algorithm>

#include "ehsense/belief.hpp"
#include "ehsense/checks.hpp"
#include "ehsense/oracle.hpp"
#include "fixtures.hpp"

using namespace ehsense;
using ehsense::testing::fig2_params;
using ehsense::testing::small_params;

TEST(Oracle, OneStage) {
  auto p = small_params();
  p.r_low = 0.0;
  EXPECT_DOUBLE_EQ(exact_finite_horizon(p, 2, 0.4, 1), 0.4);
  EXPECT_EQ(exact_finite_horizon(p, 1, 0.4, 1), 0.0);
  auto two = small_params();
  two.r_low = 0.3;
  for (double x : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const double expect =
        std::max({0.3, x, 0.5 * x, 0.5 * (x * 1.0 + (1 - x) * 0.3)});
    EXPECT_NEAR(exact_finite_horizon(two, 3, x, 1), expect, 1e-15);
  }
}

TEST(Oracle, MatchesSolverTruncations) {
  const auto p = small_params();
  const BeliefGrid grid(1001);
  for (int n = 1; n <= 8; ++n) {
    const auto table = value_iteration_steps(p, grid, n);
    const auto res = compare_with_solver(p, table, p.lambda0, n);
    EXPECT_LE(res.max_abs_gap_vs_solver, 10 * grid.step() * n * p.r_high) << "n=" << n;
    EXPECT_FALSE(res.values.empty());
  }
}

TEST(Oracle, RefusesLargeInstances) {
  EXPECT_THROW(exact_finite_horizon(fig2_params(), 10, 0.5, 3), InstanceTooLarge);
  EXPECT_THROW(exact_finite_horizon(small_params(), 2, 0.5, 11), InstanceTooLarge);
  EXPECT_THROW(exact_finite_horizon(small_params(), 2, 0.5, 0), ModelError);
}

TEST(Oracle, AgreementCheck) {
  const auto r = check_oracle_agreement(small_params(), BeliefGrid(1001), 6, {0.0, 0.5, 1.0});
  EXPECT_TRUE(r.passed) << r.detail;
  const auto skipped = check_oracle_agreement(fig2_params(), BeliefGrid(101), 6, {0.5});
  EXPECT_TRUE(skipped.passed);
  EXPECT_NE(skipped.detail.find("skipped"), std::string::npos);
}

TEST(Lemmas, ConvexityAndMonotonicityOnFig2) {
  const auto p = fig2_params();
  const auto v = value_iteration(p, BeliefGrid(1001));
  const auto report = check_lemma_suite(v, p);
  for (const char* name : {"convex_in_belief", "monotone_in_battery", "monotone_in_belief"}) {
    const auto* c = report.find(name);
    ASSERT_NE(c, nullptr);
    EXPECT_TRUE(c->passed) << report.to_text();
  }
  ASSERT_NE(report.find("saved_energy_gain_bound"), nullptr);
}

// The gain bound holds whenever b + e_saved stays below the next multiple of
// e_tx; once it crosses, the saved energy unlocks a full-rate transmission
// worth up to r_high, and the bound (1 - tau) r_high is exceeded.
TEST(Lemmas, GainBoundHoldsWithinBands) {
  const auto p = fig2_params();
  const auto v = value_iteration(p, BeliefGrid(1001));
  const double bound = (1.0 - p.tau()) * p.r_high;
  for (int b = 1; b + p.e_saved() <= p.b_max; ++b) {
    double worst = 0.0;
    for (int i = 0; i < v.cols(); ++i)
      worst = std::max(worst, v.value(b + p.e_saved(), i) - v.value(b, i));
    if (b % p.e_tx < p.e_sense) {
      EXPECT_LT(worst, bound) << "b=" << b;
    } else {
      EXPECT_GT(worst, bound) << "b=" << b;
    }
  }
  const auto* c = check_lemma_suite(v, p).find("saved_energy_gain_bound");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
}

TEST(Lemmas, MyopicTableIsConvex) {
  auto p = fig2_params();
  p.beta = 0.0;
  const auto report = check_lemma_suite(value_iteration(p, BeliefGrid(101)), p);
  EXPECT_TRUE(report.find("convex_in_belief")->passed);
  EXPECT_GE(report.find("convex_in_belief")->worst_margin, -1e-15);
}

TEST(Lemmas, CorruptedCellIsReported) {
  const auto p = fig2_params();
  auto v = value_iteration(p, BeliefGrid(101));
  v.row(35)[40] -= 1.0;
  const auto report = check_lemma_suite(v, p);
  const auto* mono = report.find("monotone_in_battery");
  EXPECT_FALSE(mono->passed);
  EXPECT_EQ(mono->worst_battery, 34);
  EXPECT_NEAR(mono->worst_belief, 0.4, 1e-12);
  EXPECT_FALSE(report.find("convex_in_belief")->passed);
  EXPECT_FALSE(report.all_passed());
  EXPECT_NE(report.to_text().find("FAIL"), std::string::npos);
}

TEST(Dominance, MyopicMarginIsExact) {
  auto p = fig2_params();
  p.beta = 0.0;
  const auto v = value_iteration(p, BeliefGrid(101));
  for (int i = 0; i <= 100; ++i) {
    const double x = v.grid().point(i);
    EXPECT_NEAR(backup_sense_defer(v, 20, x, p) - backup_sense_defer_defer(v, 20, x, p),
                x * 0.8 * 3.0, 1e-12);
  }
  const auto report = check_good_state_dominance(v, p);
  EXPECT_TRUE(report.all_passed()) << report.to_text();
}

TEST(Dominance, ZeroBeliefGivesZeroDifference) {
  const auto p = fig2_params();
  const auto v = value_iteration(p, BeliefGrid(101));
  for (int b = p.e_tx; b <= p.b_max; ++b)
    EXPECT_EQ(backup_sense_defer(v, b, 0.0, p) - backup_sense_defer_defer(v, b, 0.0, p), 0.0);
}

TEST(Structure, Fig2HasAtMostThreeThresholds) {
  const auto p = fig2_params();
  const auto r = check_threshold_structure(value_iteration(p, BeliefGrid(1001)), p, 3);
  EXPECT_TRUE(r.passed) << r.detail;
}
