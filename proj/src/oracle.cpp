#include "crowdctl/oracle.hpp"

#include <stdexcept>

#include "crowdctl/kernels.hpp"

namespace crowdctl {

namespace {

struct Recursion {
    BehaviorSequence behavior;
    OracleRecursion tables;
};

// Backward pass k = N..1: rho_bar_k = r_k + rho_hat_k, and the stage-k row at x
// is the target row twisted by rho_bar_k, whose log-normalizer is rho_hat_{k-1}(x).
Recursion backward(const BehaviorSequence& target, const RewardSchedule& reward, Exec exec) {
    const std::size_t horizon = target.size();
    if (horizon == 0) throw std::invalid_argument("solve_oracle: empty horizon");
    const std::size_t n = target.front().rows();
    if (reward.rows() != horizon || reward.cols() != n)
        throw std::invalid_argument("solve_oracle: reward shape does not match the target");
    for (const auto& kernel : target)
        if (kernel.rows() != n || kernel.cols() != n)
            throw std::invalid_argument("solve_oracle: target kernels have inconsistent shapes");

    Recursion out;
    out.behavior.assign(horizon, TransitionKernel(n, n));
    out.tables.rho_bar = Matrix(horizon + 1, n, 0.0);
    out.tables.rho_hat = Matrix(horizon + 1, n, 0.0);

    for (std::size_t k = horizon; k >= 1; --k) {
        auto rho_bar = out.tables.rho_bar.row(k - 1);
        const auto rho_hat = out.tables.rho_hat.row(k);
        const auto r = reward.row(k - 1);
        for (std::size_t y = 0; y < n; ++y) rho_bar[y] = r[y] + rho_hat[y];
        kernels::twist_stage(target[k - 1], rho_bar, out.tables.rho_hat.row(k - 1), &out.behavior[k - 1], exec);
    }
    return out;
}

} // namespace

OracleResult solve_oracle(const BehaviorSequence& target, const RewardSchedule& reward,
                          std::span<const double> initial, Exec exec) {
    auto rec = backward(target, reward, exec);
    if (initial.size() != rec.tables.rho_hat.cols())
        throw std::invalid_argument("solve_oracle: initial pmf length mismatch");
    OracleResult result;
    result.optimal_cost = -expectation(rec.tables.rho_hat.row(0), initial);
    result.behavior = std::move(rec.behavior);
    result.recursion = std::move(rec.tables);
    return result;
}

BehaviorSequence synthesize_source(const BehaviorSequence& own_target, const RewardSchedule& own_reward, Exec exec) {
    return backward(own_target, own_reward, exec).behavior;
}

} // namespace crowdctl
