#include <algorithm>
#include <cmath>
#include <limits>

#include "crowdctl/errors.hpp"
#include "crowdctl/kernels.hpp"
#include "detail/twist.hpp"

namespace crowdctl::kernels::detail {

double twist_row(std::span<const double> target_row, std::span<const double> rho_bar, std::span<double> twisted_row,
                 std::size_t x) {
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < target_row.size(); ++y)
        if (target_row[y] > 0.0) shift = std::max(shift, rho_bar[y]);
    if (shift == -std::numeric_limits<double>::infinity())
        throw EmptySupportError("target row " + std::to_string(x) + " has no mass");

    // Constant weights over the support twist nothing: keep the row as is.
    bool flat = true;
    for (std::size_t y = 0; y < target_row.size() && flat; ++y) flat = target_row[y] == 0.0 || rho_bar[y] == shift;
    if (flat) {
        if (!twisted_row.empty()) std::copy(target_row.begin(), target_row.end(), twisted_row.begin());
        return shift;
    }

    double norm = 0.0;
    for (std::size_t y = 0; y < target_row.size(); ++y) {
        const double w = target_row[y] > 0.0 ? target_row[y] * std::exp(rho_bar[y] - shift) : 0.0;
        if (!twisted_row.empty()) twisted_row[y] = w;
        norm += w;
    }
    if (!twisted_row.empty())
        for (double& w : twisted_row) w /= norm;
    return shift + std::log(norm);
}

} // namespace crowdctl::kernels::detail

namespace crowdctl::kernels::serial {

void propagate_step(const TransitionKernel& kernel, std::span<const double> in, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t x = 0; x < in.size(); ++x) {
        const auto row = kernel.row(x);
        for (std::size_t y = 0; y < out.size(); ++y) out[y] += in[x] * row[y];
    }
}

void score_stage(const TransitionKernel& target, std::span<const TransitionKernel* const> sources,
                 std::span<const double> r_bar, Matrix& scores) {
    for (std::size_t i = 0; i < sources.size(); ++i) {
        for (std::size_t x = 0; x < target.rows(); ++x) {
            const auto row = sources[i]->row(x);
            scores(i, x) = kl_divergence(row, target.row(x)) - expectation(r_bar, row);
        }
    }
}

void twist_stage(const TransitionKernel& target, std::span<const double> rho_bar, std::span<double> log_partition,
                 TransitionKernel* twisted) {
    for (std::size_t x = 0; x < target.rows(); ++x) {
        std::span<double> out_row = twisted ? twisted->row(x) : std::span<double>{};
        log_partition[x] = detail::twist_row(target.row(x), rho_bar, out_row, x);
    }
}

void row_divergences(const TransitionKernel& behavior, const TransitionKernel& target, std::span<const double> weight,
                     std::span<double> out) {
    for (std::size_t x = 0; x < target.rows(); ++x)
        out[x] = weight[x] > 0.0 ? weight[x] * kl_divergence(behavior.row(x), target.row(x)) : 0.0;
}

} // namespace crowdctl::kernels::serial
