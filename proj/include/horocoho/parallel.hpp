#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace horocoho {

/// Runs fn(0..n-1) on up to `threads` workers (0 = hardware concurrency).
/// Callers write results into index-addressed slots, so scan output is
/// deterministic regardless of scheduling. The first exception is rethrown.
inline void parallel_for(int n, int threads,
                         const std::function<void(int)>& fn) {
    if (threads == 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    threads = std::min(threads, n);
    std::vector<std::thread> pool;
    std::mutex mtx;
    std::exception_ptr err;
    int next = 0;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                int i;
                {
                    std::lock_guard<std::mutex> lock(mtx);
                    if (err || next >= n) return;
                    i = next++;
                }
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mtx);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace horocoho
