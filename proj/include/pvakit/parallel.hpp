#pragma once

#include <cstddef>
#include <functional>

namespace pvakit {

// Worker count: PVAKIT_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

// Runs body(k) for k in [0, count). The first exception thrown by any task is
// rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace pvakit
