#pragma once

#include <cstddef>
#include <functional>

namespace spin_atlas {

/// Worker count: `requested` if nonzero, else SPIN_ATLAS_THREADS if set and
/// nonzero, else the hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested = 0);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into preallocated slots so the
/// output order never depends on scheduling. The first exception thrown by a
/// worker is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace spin_atlas
