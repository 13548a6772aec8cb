#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crowdctl/errors.hpp"
#include "crowdctl/exec.hpp"
#include "crowdctl/matrix.hpp"

namespace crowdctl {

/// Acceptance tolerance for probability normalization.
inline constexpr double kNormTolerance = 1e-9;
/// Propagated marginals drifting past this are silently renormalized.
inline constexpr double kRenormThreshold = 1e-12;

/// Finite state set {0, ..., size-1}. Labels are cosmetic.
struct StateSpace {
    std::size_t size = 0;
    std::vector<std::string> labels;

    bool operator==(const StateSpace&) const = default;
};

/// Probability vector over a StateSpace.
using Pmf = Vector;

/// Square row-stochastic matrix indexed [from][to]: row x is p(. | x).
using TransitionKernel = Matrix;

/// Stage kernels; entry k-1 holds the stage-k kernel, k = 1..N.
using BehaviorSequence = std::vector<TransitionKernel>;

/// Rewards indexed [k-1][state] for stages k = 1..N.
using RewardSchedule = Matrix;

/// A behavior provider. `own_target`/`own_reward` describe the problem the
/// source solves; when absent the source is its own target with zero reward.
struct SourceSpec {
    BehaviorSequence kernels;
    std::optional<BehaviorSequence> own_target;
    std::optional<RewardSchedule> own_reward;

    bool operator==(const SourceSpec&) const = default;
};

struct Scenario {
    StateSpace space;
    std::size_t horizon = 0;
    Pmf initial;
    BehaviorSequence target;
    RewardSchedule reward;
    std::vector<SourceSpec> sources;

    std::size_t num_states() const noexcept { return space.size; }
    std::size_t num_sources() const noexcept { return sources.size(); }

    bool operator==(const Scenario&) const = default;
};

enum class ViolationKind {
    dimension,
    non_finite,
    negative_mass,
    normalization,
    absolute_continuity,
    labels,
    missing_sources,
    unpaired_source_problem,
};

const char* to_string(ViolationKind kind) noexcept;

/// One problem found by validate_scenario. `field` names the offending
/// component (e.g. `sources[1].kernels`); stage is 1-based when set.
struct Violation {
    ViolationKind kind;
    std::string field;
    std::optional<std::size_t> stage;
    std::optional<std::size_t> from;
    std::optional<std::size_t> to;
    double value = 0.0;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    std::string summary() const;
};

/// Thrown by solvers handed a scenario that fails validation.
class InvalidScenarioError : public Error {
public:
    explicit InvalidScenarioError(ValidationReport report)
        : Error("invalid scenario: " + report.summary()), report_(std::move(report)) {}

    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

/// Throws InvalidScenarioError unless validate_scenario(s) is empty.
void require_valid(const Scenario& s);

/// Reports every structural and probabilistic defect of a scenario. Never throws.
ValidationReport validate_scenario(const Scenario& s);

/// Checks a single kernel sequence against `size` states and `horizon` stages,
/// appending problems to `report` under the given field name.
void validate_behavior(const BehaviorSequence& behavior, std::size_t size, std::size_t horizon,
                       const std::string& field, ValidationReport& report);

/// sum_i p_i ln(p_i / q_i) in nats, with 0 ln(0/q) = 0.
/// Throws AbsoluteContinuityError when p_i > 0 and q_i = 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// ln sum_i probs_i exp(weights_i), max-shifted; zero-probability entries
/// are skipped. Throws EmptySupportError if every probability is zero.
double log_sum_exp(std::span<const double> weights, std::span<const double> probs);

/// sum_i p_i f_i.
double expectation(std::span<const double> f, std::span<const double> p);

/// Forward marginals pi_{k:k} for k = 0..N; entry 0 is `initial`.
std::vector<Pmf> propagate_marginals(std::span<const double> initial, const BehaviorSequence& behavior,
                                     Exec exec = Exec::parallel);

} // namespace crowdctl
