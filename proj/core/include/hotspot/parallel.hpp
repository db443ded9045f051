#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hotspot {

/// Worker count to use when the caller asked for "as many as available" (0).
inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Items are
/// claimed dynamically, so fn must write only to per-item state. The first
/// exception thrown by any item is rethrown after all threads join; items
/// not yet started when it happens are skipped.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(workers)), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace hotspot
