#pragma once

#include <cstddef>
#include <functional>

namespace zk {

/// Worker count: hardware concurrency, capped by the ZK_THREADS environment variable.
std::size_t worker_count();

/// Runs body(k) for k in [0, n). Iterations must be independent; results are
/// identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace zk
