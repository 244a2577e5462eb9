#pragma once

#include <functional>

namespace sdr {

/// Worker cap shared by all parallel loops. 0 restores the hardware default.
void set_thread_count(int n);
int thread_count();

/// Runs fn(b) for b in [0, n_blocks). Blocks may execute concurrently; the
/// caller must write results into per-block slots and reduce them in block
/// order afterwards, so the result is identical for any thread count.
void parallel_blocks(int n_blocks, const std::function<void(int)>& fn);

}  // namespace sdr
