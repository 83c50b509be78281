#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace zdc {

/// Runs body(i) for i in [0, count) on up to `workers` threads.
///
/// Indices are split into contiguous blocks. Each index is visited exactly
/// once, so results written per index do not depend on the worker count. If
/// several indices throw, the exception of the smallest index is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> failed_at(workers, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t begin = count * w / workers;
        std::size_t end = count * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] {
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    failed_at[w] = i;
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    std::size_t best = count;
    std::exception_ptr first;
    for (unsigned w = 0; w < workers; ++w) {
        if (errors[w] && failed_at[w] < best) {
            best = failed_at[w];
            first = errors[w];
        }
    }
    if (first) std::rethrow_exception(first);
}

/// Worker count for a requested parallelism (0 = hardware concurrency).
inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace zdc
