#pragma once

#include <cstddef>
#include <functional>

namespace gamow {

/// Runs body(i) for i in [0, count) on up to `threads` workers with a static
/// contiguous partition. Every index is visited exactly once, so bodies that
/// write disjoint outputs produce results independent of the thread count.
/// threads <= 1 runs inline.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// Process-wide default used when an options struct leaves threads at 0.
int default_threads();
void set_default_threads(int threads);

inline int resolve_threads(int requested) {
  return requested > 0 ? requested : default_threads();
}

}  // namespace gamow
