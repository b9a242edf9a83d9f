#pragma once

#include <atomic>
#include <cstdlib>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace bgw {

// Process-wide worker cap. 0 means "resolve from hardware and the
// BGW_MAX_WORKERS environment variable".
inline std::atomic<int>& worker_setting() {
    static std::atomic<int> w{0};
    return w;
}

inline void set_worker_count(int w) { worker_setting().store(w); }

inline int worker_count() {
    int w = worker_setting().load();
    if (w <= 0) {
        w = static_cast<int>(std::thread::hardware_concurrency());
        if (w <= 0) w = 1;
    }
    if (const char* cap = std::getenv("BGW_MAX_WORKERS")) {
        const int c = std::atoi(cap);
        if (c >= 1 && c < w) w = c;
    }
    return w < 1 ? 1 : w;
}

// Runs block_fn(b) for b = 0..num_blocks-1 across the worker pool and
// collects results by block index. The block decomposition is part of the
// caller's contract, so results are identical for every worker count; only
// the schedule varies.
template <typename T, typename Fn>
std::vector<T> run_blocks(std::size_t num_blocks, Fn&& block_fn) {
    std::vector<T> results(num_blocks);
    const int workers = std::min<int>(worker_count(), static_cast<int>(num_blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < num_blocks; ++b) results[b] = block_fn(b);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= num_blocks) return;
                results[b] = block_fn(b);
            }
        });
    }
    for (auto& th : pool) th.join();
    return results;
}

// Deterministic tree reduction; the result depends only on the input order,
// never on how the inputs were produced.
inline double pairwise_sum(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    if (xs.size() == 1) return xs[0];
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace bgw
