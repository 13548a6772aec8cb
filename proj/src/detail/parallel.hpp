#pragma once

#include <cstddef>
#include <exception>
#include <limits>

#include <omp.h>

namespace crowdctl::detail {

/// Runs body(i) for i in [0, n) across OpenMP threads. If any iteration
/// throws, the exception from the lowest failing index is rethrown after the
/// loop, so error reporting does not depend on scheduling.
template <typename Body>
void omp_for_each_index(std::size_t n, Body&& body) {
    std::exception_ptr first_error;
    std::size_t first_index = std::numeric_limits<std::size_t>::max();
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(crowdctl_first_error)
            {
                if (static_cast<std::size_t>(i) < first_index) {
                    first_index = static_cast<std::size_t>(i);
                    first_error = std::current_exception();
                }
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace crowdctl::detail
