#include "crowdctl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "crowdctl/kernels.hpp"
#include "crowdctl/oracle.hpp"

namespace crowdctl {

CostReport cost(const Scenario& s, const BehaviorSequence& behavior, Exec exec) {
    const std::size_t n = s.num_states();
    if (behavior.size() != s.horizon) throw std::invalid_argument("cost: behavior has the wrong number of stages");

    const auto marginals = propagate_marginals(s.initial, behavior, exec);

    CostReport report;
    report.per_stage_kl.assign(s.horizon, 0.0);
    report.per_stage_reward.assign(s.horizon, 0.0);
    Vector weighted(n);
    for (std::size_t k = 1; k <= s.horizon; ++k) {
        kernels::row_divergences(behavior[k - 1], s.target[k - 1], marginals[k - 1], weighted, exec);
        report.per_stage_kl[k - 1] = std::accumulate(weighted.begin(), weighted.end(), 0.0);
        report.per_stage_reward[k - 1] = expectation(s.reward.row(k - 1), marginals[k]);
    }
    report.kl_term = std::accumulate(report.per_stage_kl.begin(), report.per_stage_kl.end(), 0.0);
    report.reward_term = std::accumulate(report.per_stage_reward.begin(), report.per_stage_reward.end(), 0.0);
    report.total = report.kl_term - report.reward_term;
    return report;
}

RegretBoundReport regret_and_bound(const Scenario& s, const SelectionPolicy& policy, Exec exec) {
    const std::size_t n = s.num_states();
    constexpr double inf = std::numeric_limits<double>::infinity();

    RegretBoundReport report;
    report.selected_cost = cost(s, compose_agent_behavior(s, policy), exec).total;
    report.oracle_cost = solve_oracle(s.target, s.reward, s.initial, exec).optimal_cost;
    report.regret = report.selected_cost - report.oracle_cost;

    report.per_stage.resize(s.horizon);
    double bound = 0.0;
    for (std::size_t k = 0; k < s.horizon; ++k) {
        StageBound stage{inf, -inf, 0.0};
        const auto& target = s.target[k];
        const auto reward = s.reward.row(k);
        for (std::size_t x = 0; x < n; ++x) {
            const auto& src = s.sources[policy.choice(k, x)];
            // A source given only by kernels is its own target with zero reward.
            const auto& own_target = src.own_target ? (*src.own_target)[k] : src.kernels[k];
            for (std::size_t y = 0; y < n; ++y) {
                const double own_reward = src.own_reward ? (*src.own_reward)(k, y) : 0.0;
                stage.R = std::max(stage.R, std::abs(own_reward - reward[y]));
                const double p = target(x, y);
                if (p <= 0.0) continue;
                const double q = own_target(x, y);
                const double log_ratio = q > 0.0 ? std::log(q / p) : -inf;
                stage.l = std::min(stage.l, log_ratio);
                stage.L = std::max(stage.L, log_ratio);
            }
        }
        report.per_stage[k] = stage;
        if (std::isfinite(stage.l) && std::isfinite(stage.L))
            bound += stage.L - stage.l + 2.0 * stage.R;
        else
            bound = inf;
    }
    report.bound = bound;
    return report;
}

namespace {

struct Candidate {
    double cost = std::numeric_limits<double>::infinity();
    std::uint64_t index = std::numeric_limits<std::uint64_t>::max();

    // Lower cost wins; equal costs go to the lower (lexicographically smaller) index.
    bool better_than(const Candidate& other) const {
        return cost < other.cost || (cost == other.cost && index < other.index);
    }
};

// Policy index t encodes the flattened choice matrix in base S, with
// choice(0, 0) as the most significant digit, so ascending t is lexicographic.
IndexMatrix decode_policy(std::uint64_t t, std::size_t horizon, std::size_t n, std::size_t sources) {
    IndexMatrix choice(horizon, n);
    auto flat = choice.data();
    for (std::size_t pos = flat.size(); pos-- > 0;) {
        flat[pos] = static_cast<std::size_t>(t % sources);
        t /= sources;
    }
    return choice;
}

double policy_cost(const Scenario& s, std::uint64_t t) {
    const auto choice = decode_policy(t, s.horizon, s.num_states(), s.num_sources());
    return cost(s, compose_behavior(s, choice), Exec::serial).total;
}

std::uint64_t count_policies(const Scenario& s) {
    const std::size_t digits = s.horizon * s.num_states();
    std::uint64_t total = 1;
    for (std::size_t d = 0; d < digits; ++d) {
        if (total > kMaxBruteForcePolicies / s.num_sources()) {
            throw InstanceTooLargeError("brute_force_policy_search: " + std::to_string(s.num_sources()) + "^" +
                                        std::to_string(digits) + " policies exceeds the limit of " +
                                        std::to_string(kMaxBruteForcePolicies));
        }
        total *= s.num_sources();
    }
    return total;
}

} // namespace

BruteForceResult brute_force_policy_search(const Scenario& s, Exec exec) {
    require_valid(s);
    const std::uint64_t total = count_policies(s);

    Candidate best;
    if (exec == Exec::serial) {
        for (std::uint64_t t = 0; t < total; ++t) {
            const Candidate c{policy_cost(s, t), t};
            if (c.better_than(best)) best = c;
        }
    } else {
        const auto count = static_cast<std::int64_t>(total);
#pragma omp parallel
        {
            Candidate local;
#pragma omp for schedule(static)
            for (std::int64_t t = 0; t < count; ++t) {
                const Candidate c{policy_cost(s, static_cast<std::uint64_t>(t)), static_cast<std::uint64_t>(t)};
                if (c.better_than(local)) local = c;
            }
#pragma omp critical(crowdctl_brute_force)
            {
                if (local.better_than(best)) best = local;
            }
        }
    }

    BruteForceResult result;
    result.best_choice = decode_policy(best.index, s.horizon, s.num_states(), s.num_sources());
    result.best_cost = best.cost;
    result.policies_evaluated = total;
    return result;
}

} // namespace crowdctl
