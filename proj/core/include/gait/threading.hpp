#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

// Minimal internal parallelism. Everything defaults to a single thread;
// callers opt in via set_thread_count (the CLI exposes --threads and the
// GAIT_THREADS environment variable). Work is split into contiguous index
// ranges with results written to disjoint slots, so output does not depend
// on the thread count.

namespace gait::threading {

inline std::atomic<int>& thread_count_storage() {
    static std::atomic<int> count{1};
    return count;
}

inline int thread_count() { return thread_count_storage().load(); }

inline void set_thread_count(int n) { thread_count_storage().store(std::max(1, n)); }

template <typename Fn>
void parallel_for(long total, Fn&& fn) {
    const int threads = std::min<long>(thread_count(), total > 0 ? total : 1);
    if (threads <= 1) {
        fn(0L, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const long chunk = (total + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const long lo = t * chunk;
        const long hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace gait::threading
