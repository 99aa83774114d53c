// parallel.hpp — index-parallel sweeps capped by ASYMCOH_THREADS
//
// Each index runs exactly once and writes only to its own result slot, so
// reductions after the loop are deterministic regardless of thread count.

#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace asymcoh {

inline int worker_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("ASYMCOH_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(hw);
}

template <typename Body>
void parallel_for(long long n, Body&& body) {
    const int threads = worker_threads();
    if (threads <= 1 || n < 2) {
        for (long long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long long> next{0};
    auto worker = [&] {
        for (;;) {
            const long long i = next.fetch_add(1);
            if (i >= n) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<long long>(threads, n));
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace asymcoh
