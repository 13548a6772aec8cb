#include <doctest.h>

#include <omp.h>

#include "crowdctl/evaluation.hpp"
#include "crowdctl/kernels.hpp"
#include "crowdctl/oracle.hpp"
#include "crowdctl/selector.hpp"
#include "crowdctl/simulator.hpp"
#include "support.hpp"

using namespace crowdctl;
using namespace crowdctl::testing;

namespace {

struct ThreadCount {
    explicit ThreadCount(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
    ~ThreadCount() { omp_set_num_threads(saved); }
    int saved;
};

} // namespace

TEST_CASE("OpenMP kernels match the serial reference bit for bit") {
    ThreadCount threads(4);
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 5 + rng() % 40;
        const auto kernel = random_kernel(rng, n, false);
        const auto target = random_kernel(rng, n);
        const auto in = random_pmf(rng, n, false);

        Vector a(n), b(n);
        kernels::serial::propagate_step(kernel, in, a);
        kernels::omp::propagate_step(kernel, in, b);
        CHECK(a == b);

        Vector rho(n);
        for (double& v : rho) v = uniform(rng, -50, 50);
        TransitionKernel ta(n, n), tb(n, n);
        Vector la(n), lb(n);
        kernels::serial::twist_stage(target, rho, la, &ta);
        kernels::omp::twist_stage(target, rho, lb, &tb);
        CHECK(la == lb);
        CHECK(ta == tb);

        kernels::serial::row_divergences(kernel, target, in, a);
        kernels::omp::row_divergences(kernel, target, in, b);
        CHECK(a == b);

        std::vector<TransitionKernel> srcs{random_kernel(rng, n), random_kernel(rng, n), random_kernel(rng, n)};
        std::vector<const TransitionKernel*> ptrs{&srcs[0], &srcs[1], &srcs[2]};
        Matrix sa(3, n), sb(3, n);
        kernels::serial::score_stage(target, ptrs, rho, sa);
        kernels::omp::score_stage(target, ptrs, rho, sb);
        CHECK(sa == sb);
    }
}

TEST_CASE("solvers agree across execution modes") {
    ThreadCount threads(4);
    Rng rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        const auto s = random_scenario(rng, 3 + rng() % 20, 3, 6, 10.0);
        const auto ps = solve_selection(s, Exec::serial);
        const auto pp = solve_selection(s, Exec::parallel);
        CHECK(ps.choice == pp.choice);
        CHECK(ps.cumulative.r_hat == pp.cumulative.r_hat);

        const auto os = solve_oracle(s.target, s.reward, s.initial, Exec::serial);
        const auto op = solve_oracle(s.target, s.reward, s.initial, Exec::parallel);
        CHECK(os.behavior == op.behavior);
        CHECK(os.optimal_cost == op.optimal_cost);

        const auto behavior = compose_agent_behavior(s, ps);
        CHECK(cost(s, behavior, Exec::serial).total == cost(s, behavior, Exec::parallel).total);

        const auto rs = sample_rollouts(s.initial, behavior, ps.choice, 200, 5, Exec::serial);
        const auto rp = sample_rollouts(s.initial, behavior, ps.choice, 200, 5, Exec::parallel);
        CHECK(rs == rp);
    }
    const auto small = random_scenario(rng, 2, 2, 3);
    const auto bs = brute_force_policy_search(small, Exec::serial);
    const auto bp = brute_force_policy_search(small, Exec::parallel);
    CHECK(bs.best_choice == bp.best_choice);
    CHECK(bs.best_cost == bp.best_cost);
}

TEST_CASE("OpenMP kernels rethrow errors from worker threads") {
    ThreadCount threads(4);
    TransitionKernel target(3, 3, 0.0);
    target(0, 0) = 1.0;
    target(2, 2) = 1.0;  // row 1 is empty
    Vector rho(3, 0.0), lp(3);
    CHECK_THROWS_AS(kernels::omp::twist_stage(target, rho, lp, nullptr), EmptySupportError);
    CHECK_THROWS_AS(kernels::serial::twist_stage(target, rho, lp, nullptr), EmptySupportError);
}
