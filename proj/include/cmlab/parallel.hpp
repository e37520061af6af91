#pragma once

#include <cstddef>
#include <functional>

namespace cmlab {

/// Worker count: hardware concurrency, capped by CM_LAB_THREADS when set.
unsigned worker_count();

/// Overrides the worker count for the current process (0 restores the
/// default). Used by tests that compare results across thread counts.
void set_worker_count(unsigned n);

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// is visited exactly once; callers write into per-index slots and reduce
/// afterwards so results never depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cmlab
