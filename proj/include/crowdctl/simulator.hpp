#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "crowdctl/exec.hpp"
#include "crowdctl/model.hpp"

namespace crowdctl {

/// One sampled trajectory x_0..x_N.
struct Rollout {
    std::vector<std::size_t> states;
    /// Source used at stages 1..N, when sampled against a selection.
    std::optional<std::vector<std::size_t>> chosen_sources;
    std::uint64_t seed = 0;

    bool operator==(const Rollout&) const = default;
};

struct RolloutStatistics {
    /// (N+1) x n; row k is the empirical distribution of x_k.
    Matrix visit_frequency;
    /// Mean of r_k(x_k) for k = 1..N; empty when no reward was supplied.
    Vector mean_reward;
};

/// Uniform draw in (0, 1] from the top 53 bits of one mt19937_64 output.
double unit_draw(std::uint64_t raw) noexcept;

/// Inverse-CDF sampling over ascending index: the first i whose cumulative
/// mass is >= u. Never returns a zero-mass index. Throws EmptySupportError.
std::size_t sample_index(std::span<const double> pmf, double u);

/// Samples x_0 ~ initial and x_k ~ behavior[k-1](x_{k-1}, .) using a
/// std::mt19937_64 engine seeded with `seed`.
Rollout sample_rollout(std::span<const double> initial, const BehaviorSequence& behavior, std::uint64_t seed);

/// As above, also recording choice(k-1, x_{k-1}) for every stage.
Rollout sample_rollout(std::span<const double> initial, const BehaviorSequence& behavior,
                       const IndexMatrix& choice, std::uint64_t seed);

/// Rollout m uses seed base_seed + m, so the batch is independent of thread count.
std::vector<Rollout> sample_rollouts(std::span<const double> initial, const BehaviorSequence& behavior,
                                     std::size_t count, std::uint64_t base_seed, Exec exec = Exec::parallel);

std::vector<Rollout> sample_rollouts(std::span<const double> initial, const BehaviorSequence& behavior,
                                     const IndexMatrix& choice, std::size_t count, std::uint64_t base_seed,
                                     Exec exec = Exec::parallel);

RolloutStatistics rollout_statistics(std::span<const Rollout> rollouts, std::size_t num_states,
                                     const RewardSchedule* reward = nullptr);

/// One line per rollout: `seed,x0,...,xN[,j1,...,jN]`, no header.
void write_rollout_csv(std::ostream& out, std::span<const Rollout> rollouts);

} // namespace crowdctl
