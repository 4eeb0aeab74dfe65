#pragma once

#include <cstddef>
#include <functional>

namespace qpc {

/// Worker cap for parallel loops; 0 selects the hardware concurrency.
void set_max_threads(int n);
int max_threads();

/// Calls body(i) for every i in [0, count) on up to max_threads() workers.
/// Callers write results into per-index slots, so the outcome does not depend
/// on scheduling. If bodies throw, the exception of the smallest index is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace qpc
