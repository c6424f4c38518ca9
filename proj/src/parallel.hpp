#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tof::detail {

// Calls f(i) for i in [0, count) on up to `workers` threads. Each index is
// handled exactly once; results must be written to per-index slots.
template <typename F>
void parallel_for(std::size_t count, unsigned workers, F&& f) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::exception_ptr error;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace tof::detail
