#pragma once

#include <cstddef>
#include <functional>

namespace boundkde {

//! Worker count: BOUNDKDE_THREADS if set and positive, otherwise the
//! hardware concurrency (at least 1).
std::size_t thread_count();

//! Runs fn(0), ..., fn(n - 1) on up to thread_count() threads. Each index is
//! processed exactly once; callers write results into per-index slots so the
//! outcome does not depend on scheduling. The first exception thrown by a
//! worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace boundkde
