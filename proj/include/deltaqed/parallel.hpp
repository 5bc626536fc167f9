#pragma once

#include <functional>

namespace deltaqed {

// Number of workers used for independent sweep points: the DELTAQED_THREADS
// environment variable when set (clamped to >= 1), hardware concurrency
// otherwise, and never more than the number of tasks.
int worker_count(int tasks);

// Runs fn(0..n-1) on a bounded pool. Each index is processed exactly once;
// callers own any per-index output slots, so results are deterministic
// regardless of scheduling. The first exception thrown by fn is rethrown
// after all workers have stopped.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace deltaqed
