#pragma once

#include <cstddef>
#include <functional>

namespace dimlab {

/// Worker cap: DIMLAB_THREADS when set (minimum 1), else the hardware count.
int thread_budget();

/// Runs fn(0..n-1) across the thread budget. Tasks must be independent;
/// the first exception is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace dimlab
