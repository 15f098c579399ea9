#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace extcausal {

/// Runs body(i) for every i in [0, count). With threads > 1 the index range
/// is striped across workers; each index runs exactly once, so a body that
/// only writes to its own output slot produces results identical to the
/// sequential run. Bodies must not throw.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&body, w, workers, count] {
            for (std::size_t i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace extcausal
