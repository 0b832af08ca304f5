#pragma once

#include <cstddef>
#include <functional>

namespace mft {

// Worker count from the MFT_WORKERS environment variable, else the hardware
// concurrency (at least 1).
unsigned worker_count();

// Runs body(i) for i in [0, n) on worker_count() threads with a static
// interleaved partition. Each index is processed exactly once; the first
// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mft
