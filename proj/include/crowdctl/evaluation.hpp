#pragma once

#include <cstdint>
#include <vector>

#include "crowdctl/exec.hpp"
#include "crowdctl/model.hpp"
#include "crowdctl/selector.hpp"

namespace crowdctl {

/// C{pi} = KL(pi_{1:N|0} || p_{1:N|0}) - sum_k E_{pi_k}[r_k], split per stage.
struct CostReport {
    double total = 0.0;
    double kl_term = 0.0;
    double reward_term = 0.0;
    Vector per_stage_kl;
    Vector per_stage_reward;
};

/// Stage constants of the regret bound. l/L may be infinite.
struct StageBound {
    double l = 0.0;
    double L = 0.0;
    double R = 0.0;
};

struct RegretBoundReport {
    double regret = 0.0;
    /// +infinity when some l_k or L_k is unbounded.
    double bound = 0.0;
    std::vector<StageBound> per_stage;
    double selected_cost = 0.0;
    double oracle_cost = 0.0;
};

struct BruteForceResult {
    IndexMatrix best_choice;
    double best_cost = 0.0;
    std::uint64_t policies_evaluated = 0;
};

/// Upper limit on S^(n N) for brute_force_policy_search.
inline constexpr std::uint64_t kMaxBruteForcePolicies = 1'000'000;

/// Exact cost of `behavior` under the scenario's target and reward, via the
/// chain rule over forward marginals. Rows at zero-mass states contribute 0.
CostReport cost(const Scenario& s, const BehaviorSequence& behavior, Exec exec = Exec::parallel);

RegretBoundReport regret_and_bound(const Scenario& s, const SelectionPolicy& policy,
                                   Exec exec = Exec::parallel);

/// Evaluates every state-feedback selection and returns the cheapest, ties
/// broken towards the lexicographically smallest choice matrix.
/// Throws InstanceTooLargeError beyond kMaxBruteForcePolicies.
BruteForceResult brute_force_policy_search(const Scenario& s, Exec exec = Exec::parallel);

} // namespace crowdctl
