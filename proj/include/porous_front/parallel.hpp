#pragma once

#include <cstddef>
#include <functional>

namespace pfront {

/// Worker count: hardware concurrency capped by the PF_THREADS environment variable.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace pfront
