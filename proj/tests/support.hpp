#pragma once

// Scenario builders and random generators shared by the unit and acceptance
// suites.

#include <cstdint>
#include <random>

#include "crowdctl/model.hpp"

namespace crowdctl::testing {

inline TransitionKernel kernel2(std::vector<double> row0, std::vector<double> row1) {
    return TransitionKernel::from_rows({std::move(row0), std::move(row1)});
}

/// X = {0,1}, N = 2, target rows [0.5, 0.5]; source 0 equals the target,
/// source 1 has rows [0.9, 0.1] / [0.1, 0.9]; all rewards zero.
inline Scenario tiny_a() {
    Scenario s;
    s.space.size = 2;
    s.horizon = 2;
    s.initial = {1.0, 0.0};
    const auto uniform = kernel2({0.5, 0.5}, {0.5, 0.5});
    s.target = {uniform, uniform};
    s.reward = RewardSchedule(2, 2, 0.0);
    s.sources.push_back({s.target, std::nullopt, std::nullopt});
    const auto biased = kernel2({0.9, 0.1}, {0.1, 0.9});
    s.sources.push_back({{biased, biased}, std::nullopt, std::nullopt});
    return s;
}

/// X = {0,1}, N = 1, target rows [0.5, 0.5], reward r_1 = [0, 1]; source 0
/// equals the target, source 1 has rows [0.1, 0.9].
inline Scenario tiny_b() {
    Scenario s;
    s.space.size = 2;
    s.horizon = 1;
    s.initial = {1.0, 0.0};
    s.target = {kernel2({0.5, 0.5}, {0.5, 0.5})};
    s.reward = RewardSchedule::from_rows({{0.0, 1.0}});
    s.sources.push_back({s.target, std::nullopt, std::nullopt});
    s.sources.push_back({{kernel2({0.1, 0.9}, {0.1, 0.9})}, std::nullopt, std::nullopt});
    return s;
}

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Random pmf; with `full_support` false roughly a third of the entries are
/// zeroed (never all of them).
inline Pmf random_pmf(Rng& rng, std::size_t n, bool full_support = true) {
    Pmf p(n);
    double sum = 0.0;
    for (auto& v : p) {
        v = uniform(rng, 0.05, 1.0);
        if (!full_support && uniform(rng) < 0.33) v = 0.0;
    }
    if (std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; })) p[rng() % n] = 1.0;
    for (double v : p) sum += v;
    for (auto& v : p) v /= sum;
    return p;
}

inline TransitionKernel random_kernel(Rng& rng, std::size_t n, bool full_support = true) {
    TransitionKernel k(n, n);
    for (std::size_t x = 0; x < n; ++x) {
        const auto row = random_pmf(rng, n, full_support);
        std::copy(row.begin(), row.end(), k.row(x).begin());
    }
    return k;
}

inline BehaviorSequence random_behavior(Rng& rng, std::size_t n, std::size_t horizon, bool full_support = true) {
    BehaviorSequence b;
    for (std::size_t k = 0; k < horizon; ++k) b.push_back(random_kernel(rng, n, full_support));
    return b;
}

inline RewardSchedule random_reward(Rng& rng, std::size_t n, std::size_t horizon, double scale) {
    RewardSchedule r(horizon, n);
    for (double& v : r.data()) v = uniform(rng, -scale, scale);
    return r;
}

/// Full-support scenario with kernel-only sources and rewards in [-scale, scale].
inline Scenario random_scenario(Rng& rng, std::size_t n, std::size_t sources, std::size_t horizon,
                                double reward_scale = 1.0) {
    Scenario s;
    s.space.size = n;
    s.horizon = horizon;
    s.initial = random_pmf(rng, n);
    s.target = random_behavior(rng, n, horizon);
    s.reward = random_reward(rng, n, horizon, reward_scale);
    for (std::size_t i = 0; i < sources; ++i) s.sources.push_back({random_behavior(rng, n, horizon), std::nullopt, std::nullopt});
    return s;
}

/// Per-row random mixture of the scenario's source kernels.
inline BehaviorSequence random_mixture(Rng& rng, const Scenario& s) {
    const std::size_t n = s.num_states();
    BehaviorSequence b(s.horizon, TransitionKernel(n, n, 0.0));
    for (std::size_t k = 0; k < s.horizon; ++k) {
        for (std::size_t x = 0; x < n; ++x) {
            const auto w = random_pmf(rng, s.num_sources());
            for (std::size_t i = 0; i < s.num_sources(); ++i)
                for (std::size_t y = 0; y < n; ++y) b[k](x, y) += w[i] * s.sources[i].kernels[k](x, y);
        }
    }
    return b;
}

} // namespace crowdctl::testing
