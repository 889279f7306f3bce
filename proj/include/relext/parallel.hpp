// Minimal chunked parallel-for used by the per-point scans (metric validation,
// nearest-point argmin, usc neighbourhood precompute).  RELEXT_THREADS caps the
// worker count; 0 or unset means hardware concurrency.  Results must be written
// to disjoint slots so the outcome is identical for any thread count.
#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace relext {

inline unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const char* env = std::getenv("RELEXT_THREADS");
    if (env == nullptr || *env == '\0') return hw;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v < 0) return hw;
    if (v == 0) return hw;
    return static_cast<unsigned>(v);
}

// Runs body(i) for i in [begin, end) across at most thread_budget() threads.
template <typename Body>
void parallel_for(std::size_t begin, std::size_t end, Body&& body) {
    const std::size_t total = end > begin ? end - begin : 0;
    unsigned workers = thread_budget();
    if (workers <= 1 || total < 2 * workers) {
        for (std::size_t i = begin; i < end; ++i) body(i);
        return;
    }
    if (workers > total) workers = static_cast<unsigned>(total);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
        std::size_t lo = begin + t * chunk;
        std::size_t hi = lo + chunk < end ? lo + chunk : end;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace relext
