#pragma once

#include <cstddef>
#include <functional>

namespace jcw {

// Thread count: JCW_THREADS env var if set, else hardware concurrency.
// A value of 1 (or serial=true) runs inline on the calling thread.
int thread_count();

// Static block partition of [0, n); deterministic output for any schedule
// as long as fn(i) is independent per index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  bool serial = false);

}  // namespace jcw
