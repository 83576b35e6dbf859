#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace nvbroad {

/// Number of workers to use when the caller passes 0.
inline unsigned default_workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates `body(chunk)` for every chunk index in [0, chunks) on `workers`
/// threads and returns the per-chunk results in chunk order. The result is
/// independent of the worker count as long as `body` is a pure function of
/// its chunk index.
template <typename Result, typename Body>
std::vector<Result> parallel_chunks(std::size_t chunks, unsigned workers, Body body) {
    std::vector<Result> out(chunks);
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(chunks, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < chunks; ++i) out[i] = body(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < chunks; i = next++) out[i] = body(i);
        });
    }
    pool.clear();  // joins
    return out;
}

}  // namespace nvbroad
