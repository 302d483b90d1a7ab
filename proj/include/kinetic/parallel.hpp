#pragma once

#include <cstddef>
#include <functional>

namespace kinetic {

/// Worker cap: KINETIC_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t max_threads();

/// Calls body(index) for index in [0, count), split into contiguous chunks
/// across at most max_threads() workers. The body must only write to
/// per-index storage. The first exception thrown by a worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace kinetic
