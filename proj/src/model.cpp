#include "crowdctl/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "crowdctl/kernels.hpp"

namespace crowdctl {

const char* to_string(ViolationKind kind) noexcept {
    switch (kind) {
    case ViolationKind::dimension: return "dimension";
    case ViolationKind::non_finite: return "non_finite";
    case ViolationKind::negative_mass: return "negative_mass";
    case ViolationKind::normalization: return "normalization";
    case ViolationKind::absolute_continuity: return "absolute_continuity";
    case ViolationKind::labels: return "labels";
    case ViolationKind::missing_sources: return "missing_sources";
    case ViolationKind::unpaired_source_problem: return "unpaired_source_problem";
    }
    return "unknown";
}

std::string ValidationReport::summary() const {
    if (violations.empty()) return "no violations";
    std::ostringstream out;
    out << violations.size() << " violation(s); first: " << violations.front().message;
    return out.str();
}

namespace {

void add(ValidationReport& report, ViolationKind kind, std::string field, std::string message,
         std::optional<std::size_t> stage = {}, std::optional<std::size_t> from = {},
         std::optional<std::size_t> to = {}, double value = 0.0) {
    report.violations.push_back({kind, std::move(field), stage, from, to, value, std::move(message)});
}

std::string at(std::size_t stage, std::size_t from) {
    return " at stage " + std::to_string(stage) + ", row " + std::to_string(from);
}

void check_distribution(std::span<const double> mass, const std::string& field, std::optional<std::size_t> stage,
                        std::optional<std::size_t> from, ValidationReport& report) {
    const std::string where = stage ? at(*stage, *from) : std::string{};
    double sum = 0.0;
    bool finite = true;
    for (std::size_t y = 0; y < mass.size(); ++y) {
        if (!std::isfinite(mass[y])) {
            add(report, ViolationKind::non_finite, field, field + where + ": entry " + std::to_string(y) +
                " is not finite", stage, from, y, mass[y]);
            finite = false;
        } else if (mass[y] < 0.0) {
            add(report, ViolationKind::negative_mass, field, field + where + ": entry " + std::to_string(y) +
                " is negative (" + std::to_string(mass[y]) + ")", stage, from, y, mass[y]);
        }
        sum += mass[y];
    }
    if (finite && std::abs(sum - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << field << where << ": mass sums to " << sum;
        add(report, ViolationKind::normalization, field, msg.str(), stage, from, {}, sum);
    }
}

} // namespace

void validate_behavior(const BehaviorSequence& behavior, std::size_t size, std::size_t horizon,
                       const std::string& field, ValidationReport& report) {
    if (behavior.size() != horizon) {
        add(report, ViolationKind::dimension, field,
            field + ": has " + std::to_string(behavior.size()) + " stages, expected " + std::to_string(horizon));
    }
    for (std::size_t k = 0; k < behavior.size(); ++k) {
        const auto& kernel = behavior[k];
        if (kernel.rows() != size || kernel.cols() != size) {
            add(report, ViolationKind::dimension, field,
                field + ": stage " + std::to_string(k + 1) + " kernel is " + std::to_string(kernel.rows()) + "x" +
                    std::to_string(kernel.cols()) + ", expected " + std::to_string(size) + "x" + std::to_string(size),
                k + 1);
            continue;
        }
        for (std::size_t x = 0; x < size; ++x) check_distribution(kernel.row(x), field, k + 1, x, report);
    }
}

namespace {

void validate_reward(const RewardSchedule& reward, std::size_t size, std::size_t horizon, const std::string& field,
                     ValidationReport& report) {
    if (reward.rows() != horizon || reward.cols() != size) {
        add(report, ViolationKind::dimension, field,
            field + ": is " + std::to_string(reward.rows()) + "x" + std::to_string(reward.cols()) + ", expected " +
                std::to_string(horizon) + "x" + std::to_string(size));
        return;
    }
    for (std::size_t k = 0; k < horizon; ++k) {
        for (std::size_t x = 0; x < size; ++x) {
            if (!std::isfinite(reward(k, x))) {
                add(report, ViolationKind::non_finite, field,
                    field + ": stage " + std::to_string(k + 1) + ", state " + std::to_string(x) + " is not finite",
                    k + 1, x, {}, reward(k, x));
            }
        }
    }
}

bool same_shape(const BehaviorSequence& b, std::size_t size, std::size_t horizon) {
    return b.size() == horizon &&
           std::all_of(b.begin(), b.end(), [&](const auto& m) { return m.rows() == size && m.cols() == size; });
}

} // namespace

ValidationReport validate_scenario(const Scenario& s) {
    ValidationReport report;
    const std::size_t n = s.space.size;
    const std::size_t horizon = s.horizon;

    if (n == 0) add(report, ViolationKind::dimension, "space.size", "space.size must be at least 1");
    if (horizon == 0) add(report, ViolationKind::dimension, "horizon", "horizon must be at least 1");
    if (!s.space.labels.empty()) {
        if (s.space.labels.size() != n) {
            add(report, ViolationKind::labels, "space.labels",
                "space.labels has " + std::to_string(s.space.labels.size()) + " entries, expected " + std::to_string(n));
        }
        std::unordered_set<std::string> seen;
        for (const auto& label : s.space.labels) {
            if (!seen.insert(label).second)
                add(report, ViolationKind::labels, "space.labels", "duplicate state label '" + label + "'");
        }
    }

    if (s.initial.size() != n) {
        add(report, ViolationKind::dimension, "initial",
            "initial has " + std::to_string(s.initial.size()) + " entries, expected " + std::to_string(n));
    } else {
        check_distribution(s.initial, "initial", {}, {}, report);
    }

    validate_behavior(s.target, n, horizon, "target", report);
    validate_reward(s.reward, n, horizon, "reward", report);

    if (s.sources.empty()) add(report, ViolationKind::missing_sources, "sources", "at least one source is required");

    const bool target_ok = same_shape(s.target, n, horizon);
    for (std::size_t i = 0; i < s.sources.size(); ++i) {
        const auto& src = s.sources[i];
        const std::string field = "sources[" + std::to_string(i) + "]";
        validate_behavior(src.kernels, n, horizon, field + ".kernels", report);
        if (src.own_target.has_value() != src.own_reward.has_value()) {
            add(report, ViolationKind::unpaired_source_problem, field,
                field + ": own_target and own_reward must be given together");
        }
        if (src.own_target) validate_behavior(*src.own_target, n, horizon, field + ".own_target", report);
        if (src.own_reward) validate_reward(*src.own_reward, n, horizon, field + ".own_reward", report);

        if (!target_ok || !same_shape(src.kernels, n, horizon)) continue;
        for (std::size_t k = 0; k < horizon; ++k) {
            for (std::size_t x = 0; x < n; ++x) {
                for (std::size_t y = 0; y < n; ++y) {
                    const double q = src.kernels[k](x, y);
                    if (q > 0.0 && s.target[k](x, y) == 0.0) {
                        add(report, ViolationKind::absolute_continuity, field + ".kernels",
                            field + ".kernels" + at(k + 1, x) + ": mass " + std::to_string(q) + " on state " +
                                std::to_string(y) + " where the target has none",
                            k + 1, x, y, q);
                    }
                }
            }
        }
    }
    return report;
}

void require_valid(const Scenario& s) {
    auto report = validate_scenario(s);
    if (!report.ok()) throw InvalidScenarioError(std::move(report));
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) {
            throw AbsoluteContinuityError("kl_divergence: p[" + std::to_string(i) + "] = " + std::to_string(p[i]) +
                                          " but q[" + std::to_string(i) + "] = 0");
        }
        // Identical entries contribute exactly zero.
        if (p[i] != q[i]) sum += p[i] * std::log(p[i] / q[i]);
    }
    return std::max(sum, 0.0);
}

double log_sum_exp(std::span<const double> weights, std::span<const double> probs) {
    if (weights.size() != probs.size()) throw std::invalid_argument("log_sum_exp: length mismatch");
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < probs.size(); ++i)
        if (probs[i] > 0.0) shift = std::max(shift, weights[i]);
    if (shift == -std::numeric_limits<double>::infinity()) throw EmptySupportError("log_sum_exp: no positive probability");
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i)
        if (probs[i] > 0.0) acc += probs[i] * std::exp(weights[i] - shift);
    return shift + std::log(acc);
}

double expectation(std::span<const double> f, std::span<const double> p) {
    if (f.size() != p.size()) throw std::invalid_argument("expectation: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += p[i] * f[i];
    return acc;
}

std::vector<Pmf> propagate_marginals(std::span<const double> initial, const BehaviorSequence& behavior, Exec exec) {
    std::vector<Pmf> marginals;
    marginals.reserve(behavior.size() + 1);
    marginals.emplace_back(initial.begin(), initial.end());
    for (std::size_t k = 0; k < behavior.size(); ++k) {
        const auto& kernel = behavior[k];
        if (kernel.rows() != initial.size() || kernel.cols() != initial.size())
            throw std::invalid_argument("propagate_marginals: kernel dimension mismatch at stage " + std::to_string(k + 1));
        Pmf next(initial.size(), 0.0);
        kernels::propagate_step(kernel, marginals.back(), next, exec);
        double mass = 0.0;
        for (double v : next) mass += v;
        const double drift = std::abs(mass - 1.0);
        if (drift > kNormTolerance) {
            throw NumericalDriftError("propagate_marginals: stage " + std::to_string(k + 1) + " marginal has mass " +
                                      std::to_string(mass));
        }
        if (drift > kRenormThreshold)
            for (double& v : next) v /= mass;
        marginals.push_back(std::move(next));
    }
    return marginals;
}

} // namespace crowdctl
