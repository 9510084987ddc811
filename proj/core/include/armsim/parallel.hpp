#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace armsim {

/// Worker count from an explicit request (> 0) or the hardware.
inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Run task(i) for i in [0, count) on up to `workers` threads. Tasks write
/// their own output slot, so the result does not depend on scheduling. If any
/// task throws, the exception of the lowest failing index is rethrown.
template <class Task>
void parallel_for(std::size_t count, int workers, Task&& task) {
    if (count == 0) return;
    const auto threads = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(workers)), count));

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = count;
    std::exception_ptr error;

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace armsim
