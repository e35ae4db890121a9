#pragma once

#include <cstddef>
#include <functional>

namespace unisphere {

/// Worker count for a requested cap; 0 means the hardware concurrency.
std::size_t resolve_threads(std::size_t requested) noexcept;

/// Calls fn(i) for every i in [0, count) on up to `threads` workers. Indices
/// are handed out dynamically, so fn must write its result to slot i rather
/// than accumulate; callers reduce afterwards in index order. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace unisphere
