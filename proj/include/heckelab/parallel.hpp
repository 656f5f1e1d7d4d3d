#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace heckelab {

// Runs `work(index)` for index in [0, n) on up to `threads` workers. The first
// exception thrown by any worker is rethrown on the calling thread.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& work) {
    threads = std::max(1u, std::min<unsigned>(threads, unsigned(std::min<std::size_t>(n, 1u << 16))));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) work(i);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                next = n;
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace heckelab
