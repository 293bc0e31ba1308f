#pragma once

#include <cstddef>
#include <functional>

namespace driftlap {

// Worker count: hardware concurrency, capped by the DRIFTLAP_THREADS
// environment variable when set (re-read on every call).
int thread_budget();

// Evaluates body(i) for every i in [0, count) across the thread budget in
// contiguous chunks.  Each index must write only its own output slot, so the
// results are identical for any thread count; the first exception thrown by
// any body is rethrown on the calling thread after all workers join.
void parallel_for_indexed(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace driftlap
