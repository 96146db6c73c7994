#pragma once

#include <cstddef>
#include <functional>

namespace fcs {

/// Worker count: FCS_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() threads. Exceptions
/// from workers are rethrown (the first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

} // namespace fcs
