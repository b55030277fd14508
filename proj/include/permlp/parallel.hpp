#pragma once
// Deterministic fork-join helper: the index range is split into fixed chunks
// regardless of thread count, so results never depend on scheduling.
#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace permlp {

// Runs body(i) for i in [begin, end). With jobs <= 1 this is a plain loop.
// Each worker owns a contiguous stripe; body must only write to state indexed
// by i for the parallel path to stay race-free.
inline void parallel_for(int begin, int end, int jobs, const std::function<void(int)>& body) {
    const int count = end - begin;
    if (count <= 0) return;
    if (jobs <= 1 || count == 1) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    const int workers = std::min(jobs, count);
    const int chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int lo = begin + w * chunk;
        const int hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (int i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline int default_jobs() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

} // namespace permlp
