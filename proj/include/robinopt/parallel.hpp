#pragma once

#include <cstddef>
#include <functional>

namespace robinopt {

/// Worker count: ROBINOPT_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Iterations must not share mutable state;
/// the first exception thrown by any iteration is rethrown. Calls made from
/// inside a body run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace robinopt
