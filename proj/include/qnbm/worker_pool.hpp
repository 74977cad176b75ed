#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qnbm {

/// Runs task(i) for i in [0, n) on up to `jobs` threads. Tasks write their
/// results into caller-owned slots indexed by i, so the outcome does not
/// depend on scheduling. The first exception thrown by a task is rethrown
/// after all workers join.
inline void run_tasks(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& task) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, jobs), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        task(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace qnbm
