#pragma once

#include <cstddef>
#include <functional>

namespace actlogic {

/// Worker cap: ACTLOGIC_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_threads();

/// Runs body(0..n-1) on up to worker_threads() threads. Items are independent;
/// the first exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace actlogic
