#pragma once

#include <cstddef>
#include <functional>

namespace fbmlab {

// Number of worker threads: FBMLAB_THREADS env var if set, else
// hardware_concurrency (at least 1).
unsigned default_threads();

// Runs fn(i) for i in [0, n). Work items are claimed from a shared atomic
// counter; fn must write only to per-index slots so that results are
// independent of scheduling. Exceptions from workers are rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

}  // namespace fbmlab
