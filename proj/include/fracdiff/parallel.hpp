#pragma once

#include <cstddef>
#include <functional>

namespace fracdiff {

/// Worker count for data-parallel loops: hardware concurrency capped by the
/// FRACDIFF_THREADS environment variable (minimum 1).
unsigned worker_count();

/// Runs body(i) for i in [0, count) over worker_count() threads. Each index is
/// visited exactly once; results must be written to per-index slots so the
/// outcome does not depend on scheduling. The first exception thrown by any
/// worker is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fracdiff
