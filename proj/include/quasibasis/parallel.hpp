#pragma once

#include <cstddef>
#include <functional>

namespace quasibasis {

// Number of worker threads for numeric kernels. Reads QUASIBASIS_THREADS,
// defaulting to the hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
// write results into per-index slots so output never depends on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace quasibasis
