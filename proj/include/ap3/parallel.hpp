#pragma once

#include <cstddef>
#include <functional>

namespace ap3 {

// Worker cap for parallel_for: min(hardware_concurrency, AP3LAB_THREADS).
// AP3LAB_THREADS=1 forces serial execution.
size_t worker_count();

// Runs fn(begin, end) over disjoint chunks of [0, n). Chunks are contiguous
// and cover the range exactly once, so writes to per-index slots race-free.
// Falls back to a single inline call when one worker suffices.
void parallel_for(size_t n, const std::function<void(size_t, size_t)>& fn);

}  // namespace ap3
