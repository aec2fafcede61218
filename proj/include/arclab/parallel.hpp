#pragma once

#include <cstddef>
#include <functional>

namespace arclab {

/// Global worker count for samplers (1 = serial). Parallel loops write into
/// per-index slots and reductions happen in index order afterwards, so results
/// are identical for any thread count.
void set_worker_threads(int n);
int worker_threads();

/// Runs fn(i) for i in [0, n), partitioned across the configured workers.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace arclab
