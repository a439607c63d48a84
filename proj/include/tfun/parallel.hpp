#pragma once

// Minimal chunked worker pool for the embarrassingly parallel scans.
// Callers are responsible for merging results deterministically.

#include <cstdint>
#include <functional>

namespace tfun {

// Process-wide default worker count; 0 means hardware concurrency.
int default_workers();
void set_default_workers(int n);

// Splits [begin, end) into contiguous chunks and runs `body(lo, hi)` on each.
// workers <= 0 uses the default; a single worker runs inline.  The first
// exception thrown by any chunk is rethrown after all threads join.
void parallel_for(uint64_t begin, uint64_t end, int workers,
                  const std::function<void(uint64_t, uint64_t)>& body);

}  // namespace tfun
