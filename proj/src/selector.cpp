#include "crowdctl/selector.hpp"

#include <stdexcept>

#include "crowdctl/kernels.hpp"

namespace crowdctl {

double SelectionPolicy::predicted_cost(std::span<const double> initial) const {
    return -expectation(cumulative.r_hat.row(0), initial);
}

StageScores stage_scores(const Scenario& s, std::size_t k, std::span<const double> r_bar_k, Exec exec) {
    if (k < 1 || k > s.horizon) throw std::out_of_range("stage_scores: stage " + std::to_string(k) + " out of range");
    if (r_bar_k.size() != s.num_states()) throw std::invalid_argument("stage_scores: r_bar length mismatch");

    std::vector<const TransitionKernel*> kernels;
    kernels.reserve(s.num_sources());
    for (const auto& src : s.sources) kernels.push_back(&src.kernels[k - 1]);

    StageScores scores{Matrix(s.num_sources(), s.num_states())};
    kernels::score_stage(s.target[k - 1], kernels, r_bar_k, scores.a, exec);
    return scores;
}

SelectionPolicy solve_selection(const Scenario& s, Exec exec) {
    require_valid(s);
    const std::size_t n = s.num_states();
    const std::size_t horizon = s.horizon;

    SelectionPolicy policy;
    policy.choice = IndexMatrix(horizon, n);
    policy.scores.resize(horizon);
    policy.cumulative.r_bar = Matrix(horizon, n);
    policy.cumulative.r_hat = Matrix(horizon + 1, n, 0.0);

    for (std::size_t k = horizon; k >= 1; --k) {
        auto r_bar = policy.cumulative.r_bar.row(k - 1);
        const auto r_hat = policy.cumulative.r_hat.row(k);
        const auto reward = s.reward.row(k - 1);
        for (std::size_t y = 0; y < n; ++y) r_bar[y] = reward[y] + r_hat[y];

        auto scores = stage_scores(s, k, r_bar, exec);
        auto prev_r_hat = policy.cumulative.r_hat.row(k - 1);
        for (std::size_t x = 0; x < n; ++x) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < s.num_sources(); ++i)
                if (scores.a(i, x) < scores.a(best, x)) best = i;
            policy.choice(k - 1, x) = best;
            prev_r_hat[x] = -scores.a(best, x);
        }
        policy.scores[k - 1] = std::move(scores);
    }
    return policy;
}

BehaviorSequence compose_behavior(const Scenario& s, const IndexMatrix& choice) {
    const std::size_t n = s.num_states();
    if (choice.rows() != s.horizon || choice.cols() != n)
        throw std::invalid_argument("compose_behavior: choice matrix shape mismatch");
    BehaviorSequence behavior(s.horizon, TransitionKernel(n, n));
    for (std::size_t k = 0; k < s.horizon; ++k) {
        for (std::size_t x = 0; x < n; ++x) {
            const std::size_t j = choice(k, x);
            if (j >= s.num_sources()) throw std::out_of_range("compose_behavior: source index out of range");
            const auto src = s.sources[j].kernels[k].row(x);
            std::copy(src.begin(), src.end(), behavior[k].row(x).begin());
        }
    }
    return behavior;
}

BehaviorSequence compose_agent_behavior(const Scenario& s, const SelectionPolicy& policy) {
    return compose_behavior(s, policy.choice);
}

} // namespace crowdctl
