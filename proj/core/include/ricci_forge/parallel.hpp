#pragma once

#include <cstddef>
#include <functional>

namespace rf {

// Worker count: RICCI_FORGE_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

// Calls body(i) for i in [0, n). Each index is visited exactly once; callers
// write into per-index slots so reductions stay order independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rf
