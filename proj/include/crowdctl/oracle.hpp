#pragma once

#include <span>

#include "crowdctl/exec.hpp"
#include "crowdctl/model.hpp"

namespace crowdctl {

/// Log-domain recursion of the unconstrained problem.
///   rho_bar: N+1 rows, row k-1 holds stage k for k = 1..N+1 (last row zero).
///   rho_hat: N+1 rows, row k holds stage k for k = 0..N (last row zero).
struct OracleRecursion {
    Matrix rho_bar;
    Matrix rho_hat;
};

struct OracleResult {
    BehaviorSequence behavior;
    OracleRecursion recursion;
    double optimal_cost = 0.0;
};

/// Closed-form minimizer of KL(pi || target) - sum_k E[r_k] over all kernel
/// sequences: each row is the target row exponentially twisted by rho_bar and
/// renormalized. Throws EmptySupportError on an all-zero target row.
OracleResult solve_oracle(const BehaviorSequence& target, const RewardSchedule& reward,
                          std::span<const double> initial, Exec exec = Exec::parallel);

/// Behavior of a source that optimally solves its own problem
/// (own_target, own_reward). Same recursion as solve_oracle.
BehaviorSequence synthesize_source(const BehaviorSequence& own_target, const RewardSchedule& own_reward,
                                   Exec exec = Exec::parallel);

} // namespace crowdctl
