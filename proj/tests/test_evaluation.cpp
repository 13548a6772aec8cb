#include <doctest.h>

#include <cmath>

#include "crowdctl/evaluation.hpp"
#include "crowdctl/oracle.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace crowdctl;
using namespace crowdctl::testing;

TEST_CASE("cost examples") {
    CHECK(cost(tiny_a(), tiny_a().target).total == 0.0);

    const auto b = tiny_b();
    const auto selected = compose_agent_behavior(b, solve_selection(b));
    CHECK(cost(b, selected).total == doctest::Approx(oracle_check::kScoreB_biased).epsilon(1e-12));

    const auto oracle = solve_oracle(b.target, b.reward, b.initial);
    CHECK(cost(b, oracle.behavior).total == doctest::Approx(-oracle_check::kLogPartitionB).epsilon(1e-12));
}

TEST_CASE("cost matches trajectory enumeration and decomposes exactly") {
    Rng rng(40);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_scenario(rng, 2 + rng() % 3, 2, 1 + rng() % 4, 2.0);
        const auto behavior = random_mixture(rng, s);
        const auto report = cost(s, behavior);
        CHECK(std::abs(report.total - oracle_check::trajectory_cost(s, behavior)) <= 1e-9);
        CHECK(report.total == report.kl_term - report.reward_term);
        double kl = 0.0, reward = 0.0;
        for (double v : report.per_stage_kl) kl += v;
        for (double v : report.per_stage_reward) reward += v;
        CHECK(std::abs(kl - report.kl_term) <= 1e-12);
        CHECK(std::abs(reward - report.reward_term) <= 1e-12);
    }
}

TEST_CASE("cost ignores unreachable rows but not reachable violations") {
    auto s = tiny_b();
    auto behavior = s.target;
    s.target[0] = kernel2({0.5, 0.5}, {1.0, 0.0});
    behavior[0] = kernel2({0.5, 0.5}, {0.0, 1.0});  // violates at state 1, which has no mass
    CHECK(cost(s, behavior).total == doctest::Approx(-0.5));
    s.initial = {0.0, 1.0};
    CHECK_THROWS_AS(cost(s, behavior), AbsoluteContinuityError);
}

TEST_CASE("regret and bound examples") {
    SUBCASE("TINY-A") {
        const auto s = tiny_a();
        const auto report = regret_and_bound(s, solve_selection(s));
        CHECK(report.regret == 0.0);
        CHECK(report.bound == 0.0);
    }
    SUBCASE("TINY-B") {
        const auto s = tiny_b();
        const auto report = regret_and_bound(s, solve_selection(s));
        CHECK(report.regret == doctest::Approx(oracle_check::kRegretB).epsilon(1e-12));
        CHECK(report.bound == doctest::Approx(oracle_check::kBoundB).epsilon(1e-12));
        CHECK(std::abs(report.bound - 4.197225) <= 1e-6);
        REQUIRE(report.per_stage.size() == 1);
        CHECK(report.per_stage[0].R == 1.0);
        CHECK(report.bound >= report.regret);
    }
    SUBCASE("support-deficient selected source") {
        auto s = tiny_b();
        s.reward = RewardSchedule::from_rows({{10.0, 0.0}});
        s.sources[1].kernels[0] = kernel2({1.0, 0.0}, {1.0, 0.0});
        const auto policy = solve_selection(s);
        REQUIRE(policy.choice(0, 0) == 1u);
        const auto report = regret_and_bound(s, policy);
        CHECK(std::isfinite(report.regret));
        CHECK(report.bound == std::numeric_limits<double>::infinity());
        CHECK(report.per_stage[0].l == -std::numeric_limits<double>::infinity());
    }
    SUBCASE("own targets and rewards enter the constants") {
        auto s = tiny_b();
        s.sources[1].own_target = s.target;
        s.sources[1].own_reward = s.reward;
        s.sources[1].kernels = synthesize_source(s.target, s.reward);
        const auto report = regret_and_bound(s, solve_selection(s));
        CHECK(std::abs(report.regret) <= 1e-12);
        CHECK(report.bound == 0.0);
    }
}

TEST_CASE("regret is bounded on random scenarios") {
    Rng rng(50);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_scenario(rng, 2 + rng() % 6, 1 + rng() % 4, 1 + rng() % 5, 2.0);
        const auto report = regret_and_bound(s, solve_selection(s));
        CHECK(report.regret >= -1e-9);
        CHECK(report.regret <= report.bound + 1e-9);
    }
}

TEST_CASE("brute force examples") {
    const auto a = brute_force_policy_search(tiny_a());
    CHECK(a.best_cost == 0.0);
    CHECK(a.policies_evaluated == 16u);
    for (std::size_t v : a.best_choice.data()) CHECK(v == 0u);

    const auto b = brute_force_policy_search(tiny_b());
    CHECK(b.policies_evaluated == 4u);
    CHECK(b.best_choice(0, 0) == 1u);
    CHECK(b.best_choice(0, 1) == 0u);  // state 1 carries no mass: lexicographic tie-break
    CHECK(b.best_cost == doctest::Approx(oracle_check::kScoreB_biased).epsilon(1e-12));

    Rng rng(3);
    const auto single = brute_force_policy_search(random_scenario(rng, 3, 1, 3));
    CHECK(single.policies_evaluated == 1u);

    CHECK_THROWS_AS(brute_force_policy_search(random_scenario(rng, 5, 2, 5)), InstanceTooLargeError);
}

TEST_CASE("dynamic programming matches enumeration") {
    Rng rng(60);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_scenario(rng, 2 + rng() % 2, 2, 2 + rng() % 2, 1.0);
        const auto dp = cost(s, compose_agent_behavior(s, solve_selection(s))).total;
        const auto brute = brute_force_policy_search(s);
        CHECK(std::abs(dp - brute.best_cost) <= 1e-9);
        CHECK(dp <= brute.best_cost + 1e-12);
    }
}

TEST_CASE("zero reward without a target copy costs something") {
    Rng rng(70);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_scenario(rng, 2 + rng() % 5, 1 + rng() % 3, 1 + rng() % 4);
        s.reward = RewardSchedule(s.horizon, s.num_states(), 0.0);
        CHECK(cost(s, compose_agent_behavior(s, solve_selection(s))).total > 0.0);
    }
}
