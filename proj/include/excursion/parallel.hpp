#pragma once

#include <cstddef>
#include <functional>

namespace excursion {

/// Worker count actually used: `requested`, or the hardware concurrency
/// when `requested` is 0.
unsigned resolve_workers(unsigned requested) noexcept;

/// Runs fn(0) ... fn(n_tasks - 1) on up to `workers` threads. Tasks must
/// write to disjoint outputs; the first exception thrown is rethrown.
void parallel_for(std::size_t n_tasks, unsigned workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace excursion
