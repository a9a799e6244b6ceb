#pragma once

#include <cstddef>
#include <functional>

namespace simplex_lab {

/// Worker cap: SIMPLEX_LAB_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs task(i) for i in [0, tasks) across up to worker_count() threads.
/// Tasks must write only to their own slot; the first exception thrown by
/// any task is rethrown on the caller after all workers join.
void parallel_for(std::size_t tasks, const std::function<void(std::size_t)>& task);

}  // namespace simplex_lab
