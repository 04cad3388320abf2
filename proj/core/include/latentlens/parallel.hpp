#pragma once

#include <cstddef>
#include <functional>

namespace latentlens {

/// Worker count: LATENTLENS_THREADS if set to a positive integer, otherwise
/// the number of hardware threads (at least 1).
std::size_t worker_count();

/// Overrides worker_count() for the current process; 0 restores the default.
void set_worker_count(std::size_t n);

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
/// depend only on n and the worker count, and each index is visited exactly
/// once, so bodies that write only to their own indices give identical
/// results for any thread count. Exceptions from workers are rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace latentlens
