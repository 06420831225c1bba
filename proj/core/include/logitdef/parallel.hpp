#pragma once

#include <cstddef>
#include <functional>

namespace logitdef {

// Runs fn(i) for every i in [0, n) on up to `threads` workers (0 = hardware
// count). Each call must be independent of all others; results are then
// identical for any thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

int default_thread_count();
int resolve_threads(int threads);

}  // namespace logitdef
