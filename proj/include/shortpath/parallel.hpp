#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace shortpath {

/// Thread count used by matrix-free kernels; 0 means hardware concurrency.
void set_thread_count(unsigned threads);
unsigned thread_count();

namespace detail {
inline thread_local bool in_worker = false;
}

/// Run fn(i) for i in [0, count), splitting contiguous ranges across threads.
/// Each index is handled by exactly one thread, so results do not depend on
/// the thread count as long as fn(i) only writes data owned by index i.
/// Calls made from inside a worker run serially.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const unsigned t = detail::in_worker ? 1U : std::min<std::size_t>(thread_count(), count);
    if (t <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(t);
    for (unsigned w = 0; w < t; ++w) {
        const std::size_t lo = count * w / t;
        const std::size_t hi = count * (w + 1) / t;
        pool.emplace_back([lo, hi, &fn] {
            detail::in_worker = true;
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
}

}  // namespace shortpath
