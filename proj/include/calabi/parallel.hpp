#pragma once

#include <cstddef>
#include <functional>

namespace calabi {

/// Worker count used by parallel_for; 0 selects hardware concurrency.
void set_threads(int n);
int threads();

/// Calls fn(i) for i in [0, n) on contiguous chunks. fn must only write to slot i of
/// its outputs; reductions are done sequentially by the caller afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace calabi
