#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace leakynet::detail {

/// Runs fn(i) for i in [0, count) on a pool of workers pulling indices from a
/// shared counter. fn returns false to stop the pool. If any call throws, the
/// pool stops and the exception of the smallest failing index is rethrown.
template <class Fn>
void run_indexed(std::uint64_t count, unsigned workers, Fn&& fn) {
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mutex;
    std::exception_ptr error;
    std::uint64_t error_index = std::numeric_limits<std::uint64_t>::max();

    auto work = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                if (!fn(i)) {
                    stop = true;
                }
            } catch (...) {
                std::lock_guard lock(mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
                stop = true;
            }
        }
    };

    if (workers <= 1 || count <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        const auto width = static_cast<std::uint64_t>(workers) < count ? workers : static_cast<unsigned>(count);
        pool.reserve(width);
        for (unsigned w = 0; w < width; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace leakynet::detail
