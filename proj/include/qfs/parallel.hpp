#pragma once

#include <cstddef>
#include <functional>

namespace qfs {

/// Worker count for parallel loops. The QFS_THREADS environment variable caps
/// it; 0 or unset means hardware concurrency.
std::size_t worker_count(std::size_t jobs);

/// Runs body(i) for every i in [0, n). Iterations must be independent; results
/// may only depend on i (derived seeds), never on scheduling order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qfs
