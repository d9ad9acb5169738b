#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace curveflow {

/// Worker count from CURVEFLOW_THREADS (default 1, invalid values ignored).
std::size_t thread_count();

/// Calls f(i) for i in [0, count), split into contiguous chunks over at most
/// thread_count() threads. Callers write into per-index slots and reduce in
/// index order afterwards, so results do not depend on the thread count.
template <class F>
void parallel_for(std::size_t count, F&& f) {
    const std::size_t workers = std::min(thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(count, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([lo, hi, w, &f, &errors] {
                try {
                    for (std::size_t i = lo; i < hi; ++i) f(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    // Lowest chunk wins so the reported error is the serial one.
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace curveflow
