#pragma once

#include <cstddef>

namespace exptail {

// Worker count: OpenMP's default capped by the EXPTAIL_THREADS environment
// variable. 1 when built without OpenMP.
int effective_threads();
void apply_thread_cap();

// Fixed blocking for floating-point reductions: partial sums are formed per
// block in row order and combined in block order, so results do not depend
// on the thread count or schedule.
inline constexpr std::size_t kReduceBlock = 8192;

inline std::size_t block_count(std::size_t n) {
    return (n + kReduceBlock - 1) / kReduceBlock;
}

}  // namespace exptail
