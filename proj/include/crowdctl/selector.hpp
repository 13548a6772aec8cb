#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "crowdctl/exec.hpp"
#include "crowdctl/matrix.hpp"
#include "crowdctl/model.hpp"

namespace crowdctl {

/// Scores of one stage, indexed [source][conditioning state].
struct StageScores {
    Matrix a;
};

/// Cumulative rewards of the selection recursion.
///   r_bar: N rows, row k-1 holds stage k (reward + r_hat).
///   r_hat: N+1 rows, row k holds stage k for k = 0..N; row N is zero and
///          -r_hat row 0 is the cost-to-go from each initial state.
struct CumulativeReward {
    Matrix r_bar;
    Matrix r_hat;
};

/// State-feedback source selection. choice(k-1, x) is the source used at
/// stage k when the previous state is x; scores[k-1] is the full table it was
/// chosen from.
struct SelectionPolicy {
    IndexMatrix choice;
    std::vector<StageScores> scores;
    CumulativeReward cumulative;

    /// Expected cost of the composed behavior predicted by the recursion,
    /// -sum_x initial[x] r_hat(0, x).
    double predicted_cost(std::span<const double> initial) const;
};

/// Scores for stage k (1-based) given the cumulative reward r_bar_k.
StageScores stage_scores(const Scenario& s, std::size_t k, std::span<const double> r_bar_k,
                         Exec exec = Exec::parallel);

/// Exact solution of the integer source-selection problem by backward
/// recursion. Ties go to the lowest source index. Throws InvalidScenarioError.
SelectionPolicy solve_selection(const Scenario& s, Exec exec = Exec::parallel);

/// Kernel sequence obtained by following `choice` (N x n source indices).
BehaviorSequence compose_behavior(const Scenario& s, const IndexMatrix& choice);

BehaviorSequence compose_agent_behavior(const Scenario& s, const SelectionPolicy& policy);

} // namespace crowdctl
