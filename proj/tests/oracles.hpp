#pragma once

// Independent reference computations. Nothing here calls the library's
// numerical routines: costs come from enumerating whole trajectories and the
// closed-form values are written out by hand.

#include <cmath>
#include <vector>

#include "crowdctl/model.hpp"

namespace crowdctl::oracle_check {

/// Hand-evaluated constants for the two-state examples.
inline const double kKlBiased = 0.9 * std::log(1.8) + 0.1 * std::log(0.2);    // KL([.9,.1] || [.5,.5])
inline const double kLogPartitionB = std::log(0.5 + 0.5 * std::exp(1.0));      // ln E[exp r_1]
inline const double kScoreB_target = -0.5;                                      // 0 - E_[.5,.5][0,1]
inline const double kScoreB_biased = kKlBiased - 0.9;                            // KL - E_[.1,.9][0,1]
inline const double kOracleRowB1 = 0.5 * std::exp(1.0) / (0.5 + 0.5 * std::exp(1.0));
inline const double kRegretB = kScoreB_biased + kLogPartitionB;
inline const double kBoundB = std::log(0.9 / 0.5) - std::log(0.1 / 0.5) + 2.0;

/// C{pi} = KL(pi_{0:N} || p_{0:N}) - sum_k E_pi[r_k(x_k)] by enumerating every
/// trajectory. Both joints share the initial pmf. Exponential in N.
inline double trajectory_cost(const Scenario& s, const BehaviorSequence& behavior) {
    const std::size_t n = s.num_states();
    const std::size_t horizon = s.horizon;
    std::vector<std::size_t> path(horizon + 1, 0);
    double kl = 0.0;
    double reward = 0.0;
    std::size_t total = 1;
    for (std::size_t i = 0; i <= horizon; ++i) total *= n;
    for (std::size_t t = 0; t < total; ++t) {
        std::size_t code = t;
        for (std::size_t i = 0; i <= horizon; ++i) {
            path[i] = code % n;
            code /= n;
        }
        double pi = s.initial[path[0]];
        double p = s.initial[path[0]];
        for (std::size_t k = 1; k <= horizon; ++k) {
            pi *= behavior[k - 1](path[k - 1], path[k]);
            p *= s.target[k - 1](path[k - 1], path[k]);
        }
        if (pi == 0.0) continue;
        kl += pi * std::log(pi / p);
        for (std::size_t k = 1; k <= horizon; ++k) reward += pi * s.reward(k - 1, path[k]);
    }
    return kl - reward;
}

} // namespace crowdctl::oracle_check
