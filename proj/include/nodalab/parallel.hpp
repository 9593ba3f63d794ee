// Deterministic chunked map-reduce. Work is split into a fixed number of
// chunks independent of the thread count; per-chunk results are combined in
// chunk order, so outputs do not depend on scheduling.
#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace nodalab {

// Applies fn(chunk_index, begin, end) over [0, count) split into n_chunks
// half-open ranges and returns the per-chunk results in chunk order.
template <typename T>
std::vector<T> chunked_map(std::size_t count, std::size_t n_chunks, int threads,
                           const std::function<T(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n_chunks == 0 || count == 0) return {};
    if (n_chunks > count) n_chunks = count;
    std::vector<T> results(n_chunks);
    auto bounds = [&](std::size_t c) {
        const std::size_t b = c * count / n_chunks;
        const std::size_t e = (c + 1) * count / n_chunks;
        return std::pair<std::size_t, std::size_t>(b, e);
    };
    if (threads <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            auto [b, e] = bounds(c);
            results[c] = fn(c, b, e);
        }
        return results;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            auto [b, e] = bounds(c);
            results[c] = fn(c, b, e);
        }
    };
    std::vector<std::thread> pool;
    const int nt = std::min<std::size_t>(threads, n_chunks);
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return results;
}

}  // namespace nodalab
