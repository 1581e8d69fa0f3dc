#pragma once

#include <functional>

namespace jetadv {

/// Worker count: JETADV_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Calls fn(begin, end) on disjoint chunks covering [0, n). Chunks may run
/// concurrently; fn must not write shared state outside its chunk.
void parallel_for(int n, const std::function<void(int begin, int end)>& fn);

}  // namespace jetadv
