#pragma once

#include <cstddef>
#include <functional>

namespace tlab {

/// Worker count used by parallel loops; 0 selects the hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n) over contiguous blocks. Each index is visited
/// exactly once, so results written by index are independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tlab
