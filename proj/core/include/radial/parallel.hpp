#pragma once

#include <cstddef>
#include <functional>

namespace radial {

/// Worker count for parallel_for; 0 means std::thread::hardware_concurrency().
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n) on a static partition of the index range.
/// Bodies must only write to per-index state; callers reduce afterwards in a
/// fixed order, so results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace radial
