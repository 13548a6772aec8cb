#include "crowdctl/simulator.hpp"

#include <ostream>
#include <random>
#include <stdexcept>

#include "detail/parallel.hpp"

namespace crowdctl {

double unit_draw(std::uint64_t raw) noexcept {
    return static_cast<double>((raw >> 11) + 1) * 0x1.0p-53;
}

std::size_t sample_index(std::span<const double> pmf, double u) {
    double cdf = 0.0;
    std::size_t last_positive = pmf.size();
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        if (pmf[i] <= 0.0) continue;
        cdf += pmf[i];
        last_positive = i;
        if (cdf >= u) return i;
    }
    if (last_positive == pmf.size()) throw EmptySupportError("sample_index: distribution has no mass");
    // Rounding left the total just below u.
    return last_positive;
}

namespace {

Rollout sample(std::span<const double> initial, const BehaviorSequence& behavior, const IndexMatrix* choice,
               std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    Rollout r;
    r.seed = seed;
    r.states.reserve(behavior.size() + 1);
    r.states.push_back(sample_index(initial, unit_draw(engine())));
    if (choice) r.chosen_sources.emplace().reserve(behavior.size());
    for (std::size_t k = 0; k < behavior.size(); ++k) {
        const std::size_t x = r.states.back();
        if (choice) r.chosen_sources->push_back((*choice)(k, x));
        r.states.push_back(sample_index(behavior[k].row(x), unit_draw(engine())));
    }
    return r;
}

std::vector<Rollout> sample_batch(std::span<const double> initial, const BehaviorSequence& behavior,
                                  const IndexMatrix* choice, std::size_t count, std::uint64_t base_seed, Exec exec) {
    std::vector<Rollout> out(count);
    if (exec == Exec::serial) {
        for (std::size_t m = 0; m < count; ++m) out[m] = sample(initial, behavior, choice, base_seed + m);
    } else {
        detail::omp_for_each_index(count, [&](std::size_t m) {
            out[m] = sample(initial, behavior, choice, base_seed + m);
        });
    }
    return out;
}

} // namespace

Rollout sample_rollout(std::span<const double> initial, const BehaviorSequence& behavior, std::uint64_t seed) {
    return sample(initial, behavior, nullptr, seed);
}

Rollout sample_rollout(std::span<const double> initial, const BehaviorSequence& behavior, const IndexMatrix& choice,
                       std::uint64_t seed) {
    return sample(initial, behavior, &choice, seed);
}

std::vector<Rollout> sample_rollouts(std::span<const double> initial, const BehaviorSequence& behavior,
                                     std::size_t count, std::uint64_t base_seed, Exec exec) {
    return sample_batch(initial, behavior, nullptr, count, base_seed, exec);
}

std::vector<Rollout> sample_rollouts(std::span<const double> initial, const BehaviorSequence& behavior,
                                     const IndexMatrix& choice, std::size_t count, std::uint64_t base_seed,
                                     Exec exec) {
    return sample_batch(initial, behavior, &choice, count, base_seed, exec);
}

RolloutStatistics rollout_statistics(std::span<const Rollout> rollouts, std::size_t num_states,
                                     const RewardSchedule* reward) {
    if (rollouts.empty()) throw std::invalid_argument("rollout_statistics: no rollouts");
    const std::size_t stages = rollouts.front().states.size();
    RolloutStatistics stats;
    stats.visit_frequency = Matrix(stages, num_states, 0.0);
    if (reward) stats.mean_reward.assign(stages - 1, 0.0);

    for (const auto& r : rollouts) {
        if (r.states.size() != stages) throw std::invalid_argument("rollout_statistics: rollouts differ in length");
        for (std::size_t k = 0; k < stages; ++k) {
            if (r.states[k] >= num_states) throw std::out_of_range("rollout_statistics: state index out of range");
            stats.visit_frequency(k, r.states[k]) += 1.0;
            if (reward && k > 0) stats.mean_reward[k - 1] += (*reward)(k - 1, r.states[k]);
        }
    }
    const double total = static_cast<double>(rollouts.size());
    for (double& v : stats.visit_frequency.data()) v /= total;
    for (double& v : stats.mean_reward) v /= total;
    return stats;
}

void write_rollout_csv(std::ostream& out, std::span<const Rollout> rollouts) {
    for (const auto& r : rollouts) {
        out << r.seed;
        for (std::size_t x : r.states) out << ',' << x;
        if (r.chosen_sources)
            for (std::size_t j : *r.chosen_sources) out << ',' << j;
        out << '\n';
    }
}

} // namespace crowdctl
