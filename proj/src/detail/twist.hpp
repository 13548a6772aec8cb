#pragma once

#include <cstddef>
#include <span>

namespace crowdctl::kernels::detail {

/// Writes the exponentially twisted, normalized row into `twisted_row` (when
/// non-empty) and returns ln sum_y target_row[y] exp(rho_bar[y]).
double twist_row(std::span<const double> target_row, std::span<const double> rho_bar, std::span<double> twisted_row,
                 std::size_t x);

} // namespace crowdctl::kernels::detail
