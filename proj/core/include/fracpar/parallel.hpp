#pragma once

#include <cstddef>
#include <functional>

namespace fracpar {

// Process-wide worker cap used by every parallel loop (the CLI --threads flag
// sets it).  0 or negative resets to the hardware concurrency.
void set_thread_limit(int n);
int thread_limit();

// Runs fn(i) for i in [0, n).  Work is split into contiguous index blocks over
// at most thread_limit() workers.  Callers keep determinism by writing results
// into preallocated per-index slots and reducing sequentially afterwards.
// Exceptions from workers are captured and rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fracpar
