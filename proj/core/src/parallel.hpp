#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace qdiff::detail {

/// Runs fn(i) for i in [0, count) on `workers` threads; results are written
/// by index so the output ordering is independent of scheduling. Exceptions
/// inside fn must be handled by fn itself.
inline void parallel_for(int count, int workers,
                         const std::function<void(int)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
            fn(i);
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min(workers, count);
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace qdiff::detail
