#pragma once

#include <cstddef>
#include <functional>

namespace hubness {

/// Worker count used by the parallel kernels. Defaults to the hardware concurrency.
std::size_t num_threads();
void set_num_threads(std::size_t n);

/// Calls body(begin, end) over disjoint contiguous chunks covering [0, n).
/// Chunks are at least `grain` long. Every kernel that uses this writes only to
/// per-index outputs, so results never depend on the thread count.
void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

} // namespace hubness
