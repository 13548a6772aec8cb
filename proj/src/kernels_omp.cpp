#include "crowdctl/kernels.hpp"
#include "detail/parallel.hpp"
#include "detail/twist.hpp"

namespace crowdctl::kernels::omp {

void propagate_step(const TransitionKernel& kernel, std::span<const double> in, std::span<double> out) {
    const auto n_out = static_cast<std::ptrdiff_t>(out.size());
    const std::size_t n_in = in.size();
    // Gather per destination; the x order matches the serial scatter loop.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t y = 0; y < n_out; ++y) {
        double acc = 0.0;
        for (std::size_t x = 0; x < n_in; ++x) acc += in[x] * kernel(x, static_cast<std::size_t>(y));
        out[static_cast<std::size_t>(y)] = acc;
    }
}

void score_stage(const TransitionKernel& target, std::span<const TransitionKernel* const> sources,
                 std::span<const double> r_bar, Matrix& scores) {
    crowdctl::detail::omp_for_each_index(target.rows(), [&](std::size_t x) {
        for (std::size_t i = 0; i < sources.size(); ++i) {
            const auto row = sources[i]->row(x);
            scores(i, x) = kl_divergence(row, target.row(x)) - expectation(r_bar, row);
        }
    });
}

void twist_stage(const TransitionKernel& target, std::span<const double> rho_bar, std::span<double> log_partition,
                 TransitionKernel* twisted) {
    crowdctl::detail::omp_for_each_index(target.rows(), [&](std::size_t x) {
        std::span<double> out_row = twisted ? twisted->row(x) : std::span<double>{};
        log_partition[x] = detail::twist_row(target.row(x), rho_bar, out_row, x);
    });
}

void row_divergences(const TransitionKernel& behavior, const TransitionKernel& target, std::span<const double> weight,
                     std::span<double> out) {
    crowdctl::detail::omp_for_each_index(target.rows(), [&](std::size_t x) {
        out[x] = weight[x] > 0.0 ? weight[x] * kl_divergence(behavior.row(x), target.row(x)) : 0.0;
    });
}

} // namespace crowdctl::kernels::omp
