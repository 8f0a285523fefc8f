#pragma once

// Deterministic replication helper: work items are indexed 0..count-1 and the
// body writes into per-index slots, so results are identical for any thread
// count. The first exception thrown by a body is rethrown on the caller.

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pag {

inline void parallel_for(uint64_t count, uint32_t threads,
                         const std::function<void(uint64_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (uint64_t r = 0; r < count; ++r) body(r);
        return;
    }
    std::atomic<uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const uint64_t r = next.fetch_add(1, std::memory_order_relaxed);
            if (r >= count || failed.load(std::memory_order_relaxed)) return;
            try {
                body(r);
            } catch (...) {
                {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    const uint32_t workers = static_cast<uint32_t>(
        std::min<uint64_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (uint32_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace pag
