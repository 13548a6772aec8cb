#pragma once

// Per-stage numerical kernels. Each has a straightforward serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`; the two are
// required to agree bit-for-bit (the test suite checks this), so the OpenMP
// versions only parallelize over independent outputs and keep the reference
// summation order inside each output.

#include <span>

#include "crowdctl/exec.hpp"
#include "crowdctl/matrix.hpp"
#include "crowdctl/model.hpp"

namespace crowdctl::kernels {

namespace serial {

void propagate_step(const TransitionKernel& kernel, std::span<const double> in, std::span<double> out);

void score_stage(const TransitionKernel& target, std::span<const TransitionKernel* const> sources,
                 std::span<const double> r_bar, Matrix& scores);

void twist_stage(const TransitionKernel& target, std::span<const double> rho_bar,
                 std::span<double> log_partition, TransitionKernel* twisted);

void row_divergences(const TransitionKernel& behavior, const TransitionKernel& target,
                     std::span<const double> weight, std::span<double> out);

} // namespace serial

namespace omp {

void propagate_step(const TransitionKernel& kernel, std::span<const double> in, std::span<double> out);

void score_stage(const TransitionKernel& target, std::span<const TransitionKernel* const> sources,
                 std::span<const double> r_bar, Matrix& scores);

void twist_stage(const TransitionKernel& target, std::span<const double> rho_bar,
                 std::span<double> log_partition, TransitionKernel* twisted);

void row_divergences(const TransitionKernel& behavior, const TransitionKernel& target,
                     std::span<const double> weight, std::span<double> out);

} // namespace omp

/// out[y] = sum_x in[x] kernel(x, y).
inline void propagate_step(const TransitionKernel& kernel, std::span<const double> in,
                           std::span<double> out, Exec exec) {
    exec == Exec::serial ? serial::propagate_step(kernel, in, out) : omp::propagate_step(kernel, in, out);
}

/// scores(i, x) = KL(sources[i] row x || target row x) - <sources[i] row x, r_bar>.
/// `scores` must be sized S x n. Throws AbsoluteContinuityError.
inline void score_stage(const TransitionKernel& target, std::span<const TransitionKernel* const> sources,
                        std::span<const double> r_bar, Matrix& scores, Exec exec) {
    exec == Exec::serial ? serial::score_stage(target, sources, r_bar, scores)
                         : omp::score_stage(target, sources, r_bar, scores);
}

/// log_partition[x] = ln sum_y target(x, y) exp(rho_bar[y]). When `twisted`
/// is non-null its row x is set to target(x, .) exp(rho_bar(.)) normalized.
/// Throws EmptySupportError on an all-zero target row.
inline void twist_stage(const TransitionKernel& target, std::span<const double> rho_bar,
                        std::span<double> log_partition, TransitionKernel* twisted, Exec exec) {
    exec == Exec::serial ? serial::twist_stage(target, rho_bar, log_partition, twisted)
                         : omp::twist_stage(target, rho_bar, log_partition, twisted);
}

/// out[x] = weight[x] * KL(behavior row x || target row x), and 0 wherever
/// weight[x] == 0 (the row is not evaluated there).
inline void row_divergences(const TransitionKernel& behavior, const TransitionKernel& target,
                            std::span<const double> weight, std::span<double> out, Exec exec) {
    exec == Exec::serial ? serial::row_divergences(behavior, target, weight, out)
                         : omp::row_divergences(behavior, target, weight, out);
}

} // namespace crowdctl::kernels
