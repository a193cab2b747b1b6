#pragma once

#include <cstddef>
#include <functional>

namespace gibbs {

// Worker count: GIBBS_ISKL_THREADS if set, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n) over contiguous blocks. Callers write results
// into per-index slots and reduce afterwards in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gibbs
