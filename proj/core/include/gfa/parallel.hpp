#pragma once

#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gfa {

/// Worker count: GFA_THREADS override, else hardware concurrency.
inline int thread_width() {
    if (const char* env = std::getenv("GFA_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Static block partition over [0, n); results must be written by index so
/// output is independent of scheduling.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    int width = thread_width();
    if (width <= 1 || n < 4) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    size_t workers = std::min<size_t>(width, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mu;
    for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            size_t lo = n * w / workers;
            size_t hi = n * (w + 1) / workers;
            try {
                for (size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace gfa
