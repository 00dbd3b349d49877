#pragma once

#include <cstddef>
#include <functional>

namespace gdiff {

// Worker count: GDIFF_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs fn(i) for i in [0, n) across workers. fn must only touch
// index-addressed disjoint state; scheduling order is unspecified, exceptions
// are rethrown in the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Deterministic blocked accumulation. Indices are grouped into fixed blocks
// of kAccumulateBlock consecutive indices; each block accumulates its
// contributions in ascending index order into a block-local buffer of size
// dim, and the block buffers are then combined in ascending block order.
// The summation tree depends only on n, never on the worker count, so the
// result is bitwise identical for any partitioning.
inline constexpr std::size_t kAccumulateBlock = 1024;

void blocked_accumulate(std::size_t n, std::size_t dim,
                        const std::function<void(std::size_t, double*)>& add,
                        double* out);

}  // namespace gdiff
