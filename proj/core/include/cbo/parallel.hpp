#pragma once

#include <cstddef>
#include <functional>

namespace cbo {

/// Worker count: hardware concurrency, capped by the CBO_THREADS environment variable.
std::size_t worker_count();

/// Runs body(i) for i in [0, n), split into contiguous chunks over worker_count()
/// threads. Calls made from inside a running parallel_for execute serially.
/// The first exception thrown by any chunk is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cbo
