#pragma once

#include <cstddef>
#include <functional>

namespace gaussclone {

// Worker-pool size: GAUSSCLONE_THREADS if set (>= 1), else the hardware
// concurrency. Grid results must not depend on this value; work items get
// independent derived seeds and write to index-addressed slots.
int default_thread_count();

// Run body(0..n-1) on up to `threads` workers (serial when threads <= 1).
// Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace gaussclone
