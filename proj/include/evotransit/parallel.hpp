#pragma once

#include <cstddef>
#include <functional>

namespace evotransit {

/// Worker count for batch work: EVOTRANSIT_THREADS when set to a positive
/// integer, otherwise the hardware concurrency (at least 1).
[[nodiscard]] std::size_t thread_budget();

/// Calls fn(i) for every i in [0, count) on up to `threads` workers. Work
/// items are claimed dynamically, so fn must write results by index. The
/// first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace evotransit
