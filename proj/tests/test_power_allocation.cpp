// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "pinch/power_allocation.hpp"
#include "pinch/random.hpp"
#include "pinch/testing/lp_oracle.hpp"

using namespace pinch;
using pinch::testing::lp_objective;
using pinch::testing::lp_oracle;
using pinch::testing::power_lp_constraints;
using pinch::testing::satisfies;

using Vec = std::vector<double>;

TEST(MinPowers, HandExamples)
{
    const auto one = min_powers(Vec{1}, Vec{1});
    EXPECT_DOUBLE_EQ(one[0], 1.0);

    const auto two = min_powers(Vec{4, 1}, Vec{1, 1});
    EXPECT_DOUBLE_EQ(two[0], 0.5);
    EXPECT_DOUBLE_EQ(two[1], 1.0);
    const auto r2 = noma_rates(two, Vec{4, 1});
    EXPECT_NEAR(r2[0], 1.0, 1e-15);
    EXPECT_NEAR(r2[1], 1.0, 1e-15);

    const auto three = min_powers(Vec{8, 4, 1}, Vec{1, 1, 1});
    EXPECT_DOUBLE_EQ(three[0], 0.5);
    EXPECT_DOUBLE_EQ(three[1], 0.5);
    EXPECT_DOUBLE_EQ(three[2], 1.0);
}

TEST(MinPowers, ReproducesTargetsThroughSicRates)
{
    Rng rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform01() * 10);
        Vec h(m), r(m);
        for (double& v : h) v = std::pow(10.0, rng.uniform(-1, 5));
        std::sort(h.begin(), h.end(), std::greater<>());
        for (double& v : r) v = rng.uniform(0, 3);
        const auto rates = noma_rates(min_powers(h, r), h);
        for (std::size_t k = 0; k < m; ++k) EXPECT_NEAR(rates[k], r[k], 1e-9 * std::max(r[k], 1e-300));
    }
}

TEST(CheckFeasibility, Examples)
{
    EXPECT_TRUE(check_feasibility(Vec{0.5, 1}, Vec{1, 1}));
    EXPECT_FALSE(check_feasibility(Vec{0.5, 1.2}, Vec{1, 1}));
    EXPECT_TRUE(check_feasibility(min_powers(Vec{3, 2, 1}, Vec{0, 0, 0}), Vec{1e-9, 1e-9, 1e-9}));
}

TEST(GreedyAllocation, EarlyStopOnUserOneConstraint)
{
    const auto a = greedy_residual_allocation(Vec{4, 1}, Vec{1, 1}, Vec{1, 10});
    ASSERT_TRUE(a.feasible);
    EXPECT_DOUBLE_EQ(a.powers[0], 1.0);
    EXPECT_DOUBLE_EQ(a.powers[1], 3.0);
    ASSERT_TRUE(a.binding_user.has_value());
    EXPECT_EQ(*a.binding_user, 1u);
    const auto r = noma_rates(a.powers, Vec{4, 1});
    EXPECT_NEAR(r[0], 1.0, 1e-12);
    EXPECT_NEAR(noma_sum_rate_closed_form(a.powers, Vec{4, 1}), 3.0, 1e-12);

    // Brute force over P_2 on a 1e-4 grid with P_1 at its budget.
    double best_p2 = -1.0, best_sum = -1.0;
    for (int k = 0; k <= 100000; ++k) {
        const double p2 = k * 1e-4;
        const auto rates = noma_rates(Vec{1.0, p2}, Vec{4, 1});
        if (rates[0] < 1.0 - 1e-12 || rates[1] < 1.0 - 1e-12) continue;
        const double s = rates[0] + rates[1];
        if (s > best_sum) {
            best_sum = s;
            best_p2 = p2;
        }
    }
    EXPECT_NEAR(best_p2, 3.0, 1e-4);
    EXPECT_NEAR(best_sum, 3.0, 1e-4);
}

TEST(GreedyAllocation, CapAboveBudgetUsesFullPower)
{
    const auto a = greedy_residual_allocation(Vec{4, 1}, Vec{1, 1}, Vec{1, 2});
    ASSERT_TRUE(a.feasible);
    EXPECT_EQ(a.powers, (Vec{1, 2}));
    EXPECT_FALSE(a.binding_user.has_value());
}

TEST(GreedyAllocation, ZeroTargetsGiveFullPower)
{
    const Vec p_max{0.3, 0.7, 1.1};
    const auto a = greedy_residual_allocation(Vec{9, 5, 2}, Vec{0, 0, 0}, p_max);
    ASSERT_TRUE(a.feasible);
    EXPECT_EQ(a.powers, p_max);
}

TEST(GreedyAllocation, InfeasibleReturnsMinimumPowers)
{
    const auto a = greedy_residual_allocation(Vec{4, 1}, Vec{3, 3}, Vec{1, 1});
    EXPECT_FALSE(a.feasible);
    EXPECT_EQ(a.powers, min_powers(Vec{4, 1}, Vec{3, 3}));
}

TEST(GreedyAllocation, ProtectsEveryEarlierUser)
{
    // User 1 has a loose target, user 2 a tight one: raising P_3 first hits
    // user 2's constraint. Protecting user 1 alone would overshoot.
    const Vec h{100, 10, 1};
    const Vec r{0.1, 2.0, 0.5};
    const Vec p_max{1, 1, 100};
    const auto a = greedy_residual_allocation(h, r, p_max);
    ASSERT_TRUE(a.feasible);
    EXPECT_TRUE(satisfies(power_lp_constraints(h, r, p_max), a.powers, 1e-9));
    const auto rates = noma_rates(a.powers, h);
    EXPECT_NEAR(rates[1], 2.0, 1e-9);
    EXPECT_GE(rates[0], 0.1);

    const double user1_only_cap = (p_max[0] * h[0] / (std::pow(2.0, r[0]) - 1.0) - p_max[1] * h[1] - 1.0) / h[2];
    EXPECT_GT(user1_only_cap, a.powers[2]);
    const auto oracle = lp_oracle(h, r, p_max);
    EXPECT_NEAR(lp_objective(a.powers, h), lp_objective(oracle.powers, h), 1e-9 * lp_objective(oracle.powers, h));
}

TEST(LpOracle, AgreesOnHandExamples)
{
    const std::vector<std::tuple<Vec, Vec, Vec>> cases{
        {Vec{4, 1}, Vec{1, 1}, Vec{1, 10}}, {Vec{4, 1}, Vec{1, 1}, Vec{1, 2}}, {Vec{9, 5, 2}, Vec{0, 0, 0}, Vec{1, 1, 1}}};
    for (const auto& [h, r, p] : cases) {
        const auto g = greedy_residual_allocation(h, r, p);
        const auto o = lp_oracle(h, r, p);
        ASSERT_TRUE(o.feasible);
        EXPECT_NEAR(lp_objective(g.powers, h), lp_objective(o.powers, h), 1e-9 * lp_objective(o.powers, h));
    }
    const auto single = lp_oracle(Vec{2}, Vec{1}, Vec{3});
    ASSERT_TRUE(single.feasible);
    EXPECT_NEAR(single.powers[0], 3.0, 1e-12);
    EXPECT_FALSE(lp_oracle(Vec{4, 1}, Vec{3, 3}, Vec{1, 1}).feasible);
}

TEST(GreedyAllocation, MatchesLpOracleOnRandomInstances)
{
    Rng rng(4242);
    int feasible = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform01() * 5);
        Vec h(m), r(m), p(m);
        for (double& v : h) v = std::pow(10.0, rng.uniform(0, 4));
        std::sort(h.begin(), h.end(), std::greater<>());
        for (double& v : r) v = rng.uniform(0, 2);
        const auto p_min = min_powers(h, r);
        for (std::size_t k = 0; k < m; ++k) p[k] = p_min[k] * rng.uniform(0.7, 10) + rng.uniform(0, 0.5);
        const auto g = greedy_residual_allocation(h, r, p);
        const auto o = lp_oracle(h, r, p);
        ASSERT_EQ(g.feasible, o.feasible) << "trial " << trial;
        if (!g.feasible) continue;
        ++feasible;
        EXPECT_TRUE(satisfies(power_lp_constraints(h, r, p), g.powers, 1e-9));
        const double og = lp_objective(o.powers, h);
        EXPECT_NEAR(lp_objective(g.powers, h), og, 1e-9 * og);
    }
    EXPECT_GT(feasible, 500);
}

TEST(GreedyAllocation, RaisingATargetNeverHelps)
{
    Rng rng(8);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform01() * 4);
        Vec h(m), r(m), p(m, 1.0);
        for (double& v : h) v = std::pow(10.0, rng.uniform(1, 4));
        std::sort(h.begin(), h.end(), std::greater<>());
        for (double& v : r) v = rng.uniform(0, 1);
        const auto base = greedy_residual_allocation(h, r, p);
        if (!base.feasible) continue;
        auto r2 = r;
        r2[static_cast<std::size_t>(rng.uniform01() * static_cast<double>(m))] += rng.uniform(0, 1);
        const auto raised = greedy_residual_allocation(h, r2, p);
        if (!raised.feasible) continue;
        EXPECT_LE(lp_objective(raised.powers, h), lp_objective(base.powers, h) * (1 + 1e-12));
    }
}

TEST(AllocationWorkspace, MatchesAllocateAt)
{
    const SystemParams p;
    const Deployment dep({{5, 3}, {30, -2}, {55, 8}}, {1, 1, 1}, {1, 1, 1});
    AllocationWorkspace ws(dep, p);
    for (double x = 0; x <= 60; x += 1.5) {
        const auto alloc = allocate_at(dep, x, p);
        const auto gain = ws.optimal_gain(x);
        ASSERT_EQ(alloc.feasible, gain.has_value());
        if (!gain) continue;
        const auto h = effective_channels(dep, x, p);
        EXPECT_NEAR(*gain, lp_objective(alloc.powers_by_user, h), 1e-9 * *gain);
    }
}

TEST(FeasibilityMargin, SignMatchesFeasibility)
{
    const SystemParams p;
    const Deployment dep({{5, 3}, {55, 8}}, {1e-4, 1e-4}, {2, 2});
    for (double x = 0; x <= 60; x += 0.5) {
        EXPECT_EQ(feasibility_margin(dep, x, p) >= -1e-9, allocate_at(dep, x, p).feasible) << x;
    }
}
