#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace latentgp {

// Runs fn(i) for i in [0, n) on up to `threads` workers, splitting the
// range into contiguous chunks. Results must be written to slots owned
// by index i; with that discipline the output is identical for any
// thread count. The first exception thrown by any worker is rethrown
// on the calling thread.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (n == 0)
        return;
    if (threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::exception_ptr first_error;
    std::mutex error_mutex;

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = n * w / workers;
        std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i)
                    fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

}  // namespace latentgp
