#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace rmtlab {

// Splits [0, total) into contiguous chunks and runs fn(begin, end, chunk)
// on a small thread pool. Per-chunk results must be merged by the caller in
// chunk order; chunk boundaries depend only on (total, threads), and trial
// seeds depend only on the trial index, so results are scheduler-independent.
inline void parallel_for_chunks(std::int64_t total, int threads,
                                const std::function<void(std::int64_t, std::int64_t, int)>& fn) {
    if (threads < 1) threads = 1;
    if (total <= 0) return;
    const int chunks = static_cast<int>(std::min<std::int64_t>(threads, total));
    if (chunks == 1) {
        fn(0, total, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(chunks));
    const std::int64_t per = (total + chunks - 1) / chunks;
    for (int c = 0; c < chunks; ++c) {
        const std::int64_t begin = c * per;
        const std::int64_t end = std::min<std::int64_t>(begin + per, total);
        if (begin >= end) break;
        pool.emplace_back([=, &fn] { fn(begin, end, c); });
    }
    for (std::thread& t : pool) t.join();
}

} // namespace rmtlab
