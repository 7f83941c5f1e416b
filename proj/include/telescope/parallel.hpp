#pragma once

#include <cstddef>
#include <mutex>
#include <thread>
#include <vector>

namespace telescope {

/// Runs fn(i) for i in [0, count). Results must be written to index-addressed
/// slots so the outcome is independent of the worker count.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::mutex mutex;
    std::size_t next = 0;
    std::vector<std::thread> workers;
    const int n_workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    workers.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
            while (true) {
                std::size_t i;
                {
                    std::lock_guard<std::mutex> lock(mutex);
                    if (next >= count) return;
                    i = next++;
                }
                fn(i);
            }
        });
    }
    for (auto& worker : workers) worker.join();
}

} // namespace telescope
