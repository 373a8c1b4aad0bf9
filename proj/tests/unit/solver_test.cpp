#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ehsense/belief.hpp"
#include "ehsense/solver.hpp"
#include "fixtures.hpp"

using namespace ehsense;
using ehsense::testing::fig2_params;
using ehsense::testing::two_rate_params;

namespace {

ValueTable filled(const BeliefGrid& grid, int b_max, double (*f)(int, double)) {
  ValueTable v(grid, b_max);
  for (int b = 0; b <= b_max; ++b) {
    auto row = v.row(b);
    for (int i = 0; i < grid.size(); ++i) row[static_cast<std::size_t>(i)] = f(b, grid.point(i));
  }
  return v;
}

double bowl(int b, double p) { return 0.1 * b + (p - 0.3) * (p - 0.3); }

}  // namespace

TEST(Backups, MyopicValues) {
  auto params = two_rate_params();
  params.beta = 0.0;
  const BeliefGrid grid(101);
  const ValueTable zero(grid, params.b_max);
  EXPECT_EQ(backup_defer(zero, 20, 0.4, params), 0.0);
  EXPECT_EQ(backup_low(zero, 20, 0.4, params), 1.0);
  EXPECT_DOUBLE_EQ(backup_high(zero, 20, 0.5, params), 1.5);
  EXPECT_DOUBLE_EQ(backup_high(zero, 20, 1.0, params), 3.0);
  EXPECT_EQ(backup_high(zero, 20, 0.0, params), 0.0);
  EXPECT_DOUBLE_EQ(backup_sense_defer(zero, 20, 1.0, params), 2.4);
  EXPECT_EQ(backup_sense_defer(zero, 20, 0.0, params), 0.0);
  EXPECT_EQ(backup_sense_defer(zero, 5, 0.8, params), 0.0);
  EXPECT_DOUBLE_EQ(backup_sense_transmit(zero, 20, 0.0, params), 0.8);
  EXPECT_DOUBLE_EQ(backup_sense_transmit(zero, 20, 1.0, params), 2.4);
  EXPECT_DOUBLE_EQ(backup_sense_transmit(zero, 20, 0.5, params), 1.6);
  EXPECT_EQ(backup_sense_defer_defer(zero, 20, 0.7, params), 0.0);
  EXPECT_DOUBLE_EQ(backup_sense_defer(zero, 20, 0.7, params) -
                       backup_sense_defer_defer(zero, 20, 0.7, params),
                   0.7 * 0.8 * 3.0);
}

TEST(Backups, HandExpansion) {
  const auto params = fig2_params();
  const BeliefGrid grid(1001);
  const ValueTable v = filled(grid, params.b_max, bowl);
  const double p = 0.41;
  const double jp = belief_update_no_obs(p, params);
  // b = 0: harvest 0 w.p. 0.9, 10 w.p. 0.1
  EXPECT_NEAR(backup_defer(v, 0, p, params),
              0.9 * params.beta * v.at(0, jp) + 0.1 * params.beta * v.at(10, jp), 1e-12);

  auto one_atom = params;
  one_atom.energy_pmf = {1.0};
  EXPECT_NEAR(backup_defer(v, 50, p, one_atom), one_atom.beta * v.at(50, jp), 1e-12);

  const double h = p * (3.0 + params.beta * (0.9 * v.at(10, 0.9) + 0.1 * v.at(20, 0.9))) +
                   (1 - p) * params.beta * (0.9 * v.at(10, 0.6) + 0.1 * v.at(20, 0.6));
  EXPECT_NEAR(backup_high(v, 20, p, params), h, 1e-12);

  const double od = p * (2.4 + params.beta * (0.9 * v.at(10, 0.9) + 0.1 * v.at(20, 0.9))) +
                    (1 - p) * params.beta * (0.9 * v.at(18, 0.6) + 0.1 * v.at(28, 0.6));
  EXPECT_NEAR(backup_sense_defer(v, 20, p, params), od, 1e-12);

  // sense-only regime spends e_sense on both channel states
  const double so = params.beta * (p * (0.9 * v.at(3, 0.9) + 0.1 * v.at(13, 0.9)) +
                                   (1 - p) * (0.9 * v.at(3, 0.6) + 0.1 * v.at(13, 0.6)));
  EXPECT_NEAR(backup_sense_defer(v, 5, p, params), so, 1e-12);
}

TEST(Backups, LowRateExpansion) {
  auto params = two_rate_params();
  params.energy_pmf = {1.0};
  const BeliefGrid grid(1001);
  const ValueTable v = filled(grid, params.b_max, bowl);
  const double p = 0.25;
  EXPECT_NEAR(backup_low(v, 10, p, params),
              1.0 + params.beta * v.at(0, belief_update_no_obs(p, params)), 1e-12);
  EXPECT_THROW(backup_low(v, 9, p, params), InfeasibleAction);
}

TEST(BellmanStep, FirstSweepFromZero) {
  const auto params = two_rate_params();
  const BeliefGrid grid(101);
  const ValueTable next = bellman_step(ValueTable(grid, params.b_max), params);
  for (int i = 0; i < grid.size(); ++i) {
    const double p = grid.point(i);
    const double expect = std::max({1.0, p * 3.0, 0.8 * p * 3.0, 0.8 * (p * 3.0 + (1 - p) * 1.0)});
    EXPECT_NEAR(next.value(20, i), expect, 1e-12);
    EXPECT_EQ(next.value(0, i), 0.0);
    EXPECT_EQ(next.value(1, i), 0.0);
  }
  EXPECT_TRUE(ValueTable::defined(next.q(Action::LowRate, 20, 3)));
  EXPECT_FALSE(ValueTable::defined(next.q(Action::LowRate, 5, 3)));
  EXPECT_FALSE(ValueTable::defined(next.q(Action::HighRate, 9, 3)));
  EXPECT_TRUE(ValueTable::defined(next.q(Action::SenseDefer, 5, 3)));
  EXPECT_FALSE(ValueTable::defined(next.q(Action::SenseDefer, 1, 3)));
}

TEST(BellmanStep, SpecialCaseMyopic) {
  const auto params = fig2_params();
  const BeliefGrid grid(101);
  const ValueTable next = bellman_step(ValueTable(grid, params.b_max), params);
  EXPECT_NEAR(next.value(20, 50), 1.5, 1e-12);
  EXPECT_NEAR(next.q(Action::SenseDefer, 20, 50), 1.2, 1e-12);
  EXPECT_FALSE(ValueTable::defined(next.q(Action::LowRate, 20, 50)));
  EXPECT_FALSE(ValueTable::defined(next.q(Action::SenseTransmit, 20, 50)));
}

TEST(BellmanStep, AgreesWithScalarBackups) {
  const auto params = two_rate_params();
  const BeliefGrid grid(101);
  const ValueTable v = filled(grid, params.b_max, bowl);
  const ValueTable next = bellman_step(v, params);
  for (int b : {0, 1, 5, 10, 23, 50}) {
    for (int i : {0, 13, 50, 77, 100}) {
      const double p = grid.point(i);
      double best = -1;
      for (Action a : kAllActions) {
        if (!is_feasible(a, b, params)) continue;
        const double q = backup(a, v, b, p, params);
        EXPECT_NEAR(next.q(a, b, i), q, 1e-12) << action_label(a) << " b=" << b << " i=" << i;
        best = std::max(best, q);
      }
      EXPECT_NEAR(next.value(b, i), best, 1e-12);
    }
  }
}

TEST(ValueIteration, MyopicConvergesInTwoSweeps) {
  auto params = fig2_params();
  params.beta = 0.0;
  const auto v = value_iteration(params, BeliefGrid(101));
  EXPECT_EQ(v.iterations, 2);
  EXPECT_EQ(v.residual, 0.0);
}

TEST(ValueIteration, NoHarvestKeepsEmptyBatteryAtZero) {
  auto params = fig2_params();
  params.energy_pmf = {1.0};
  const auto v = value_iteration(params, BeliefGrid(101));
  for (int i = 0; i < v.cols(); ++i) EXPECT_EQ(v.value(0, i), 0.0);
}

TEST(ValueIteration, ConvergedTableIsAFixedPoint) {
  const auto params = two_rate_params();
  const auto v = value_iteration(params, BeliefGrid(201));
  EXPECT_LE(v.residual, 1e-9);
  const auto again = bellman_step(v, params);
  double diff = 0;
  for (std::size_t k = 0; k < v.values().size(); ++k)
    diff = std::max(diff, std::abs(v.values()[k] - again.values()[k]));
  EXPECT_LE(diff, 1e-9 * params.beta + 1e-15);
}

TEST(ValueIteration, IteratesAreMonotoneFromZero) {
  const auto params = fig2_params();
  const BeliefGrid grid(101);
  ValueTable prev(grid, params.b_max);
  for (int n = 0; n < 30; ++n) {
    ValueTable next = bellman_step(prev, params);
    for (std::size_t k = 0; k < next.values().size(); ++k)
      ASSERT_GE(next.values()[k], prev.values()[k] - 1e-12);
    prev = std::move(next);
  }
}

TEST(ValueIteration, ThrowsOnTooFewSweeps) {
  SolverOptions opts;
  opts.max_iter = 5;
  try {
    value_iteration(fig2_params(), BeliefGrid(101), opts);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.iterations(), 5);
    EXPECT_GT(e.residual(), 1e-9);
  }
  EXPECT_EQ(default_max_iter(0.98), 5000);
  EXPECT_EQ(default_max_iter(0.9), 1000);
}

TEST(ValueIteration, RestrictedActions) {
  const auto params = fig2_params();
  SolverOptions opts;
  opts.allowed = {Action::Defer, Action::HighRate};
  const auto v = value_iteration(params, BeliefGrid(101), opts);
  EXPECT_FALSE(ValueTable::defined(v.q(Action::SenseDefer, 20, 40)));
  EXPECT_TRUE(ValueTable::defined(v.q(Action::HighRate, 20, 40)));
  const auto full = value_iteration(params, BeliefGrid(101));
  for (std::size_t k = 0; k < v.values().size(); ++k)
    EXPECT_LE(v.values()[k], full.values()[k] + 1e-9);
}
