#pragma once

#include <cstddef>
#include <functional>

namespace phasespace {

// Process-wide worker count used by parallel_for. Values < 1 are clamped to 1.
void set_num_threads(int n);
int num_threads();

// Runs body(i) for i in [0, n). Work is split into contiguous static chunks;
// each index is visited exactly once and writes must be index-local, so the
// result does not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace phasespace
