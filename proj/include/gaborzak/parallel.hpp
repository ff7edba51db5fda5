#pragma once

#include <cstddef>
#include <functional>

namespace gaborzak {

/// Caps worker threads used by grid scans, certificate searches and Gram
/// assembly. 0 means "all hardware threads". Results never depend on it.
void set_thread_limit(unsigned threads);
unsigned thread_limit();

/// Runs body(i) for i in [0, n) over contiguous static chunks. Each index is
/// visited exactly once; callers write to per-index slots and reduce after.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gaborzak
