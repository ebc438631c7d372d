#pragma once

#include <cstddef>
#include <functional>

namespace wck {

// Hardware concurrency, capped by the WCK_THREADS environment variable.
int thread_count();

// Runs fn(0..n-1) on up to thread_count() threads. Iterations must be
// independent; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wck
