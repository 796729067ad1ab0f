#pragma once

#include <cstddef>
#include <functional>

namespace crancache {

/// Worker cap used when a caller passes 0 threads. Defaults to 1.
void set_default_threads(unsigned threads) noexcept;
unsigned default_threads() noexcept;

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = default).
/// Indices are handed out in contiguous blocks; fn must only write state
/// owned by its index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

}  // namespace crancache
