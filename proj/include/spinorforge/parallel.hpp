#pragma once
#include <functional>

namespace spinorforge {

// Worker count: SPINORFORGE_THREADS if set (>= 1), else hardware concurrency.
int worker_count();
// Runs body(k) for k in [0, n); iterations must write disjoint data.
void parallel_for(int n, const std::function<void(int)> &body);

} // namespace spinorforge
