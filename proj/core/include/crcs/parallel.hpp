#pragma once

#include <cstddef>
#include <functional>

namespace crcs {

// Thread count from CRCS_THREADS, else hardware concurrency (at least 1).
int default_thread_count();

// Calls body(i) for i in [0, count) on up to `threads` workers (0: default).
// Each index runs exactly once; callers write results by index so the outcome
// does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace crcs
