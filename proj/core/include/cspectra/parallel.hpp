#pragma once

#include <cstddef>
#include <cstdlib>
#include <span>
#include <thread>
#include <vector>

// Deterministic parallel helpers. All reductions are pairwise with a fixed
// association order, so results do not depend on the worker count.

namespace cspectra {

inline int& thread_count_ref() {
    static int count = [] {
        if (const char* env = std::getenv("CSPECTRA_THREADS")) {
            int v = std::atoi(env);
            if (v > 0) return v;
        }
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        return hw > 0 ? hw : 1;
    }();
    return count;
}

inline int thread_count() { return thread_count_ref(); }

inline void set_thread_count(int count) {
    thread_count_ref() = count > 0 ? count : 1;
}

// Runs body(begin, end) over disjoint chunks of [0, n). Each chunk writes its
// own output slots; no cross-chunk reduction happens here.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    int workers = thread_count();
    if (workers <= 1 || n < 256) {
        body(std::size_t{0}, n);
        return;
    }
    std::size_t chunks = static_cast<std::size_t>(workers);
    if (chunks > n) chunks = n;
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    std::size_t base = n / chunks, extra = n % chunks, begin = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t len = base + (c < extra ? 1 : 0);
        pool.emplace_back([&body, begin, len] { body(begin, begin + len); });
        begin += len;
    }
    for (auto& t : pool) t.join();
}

// Fixed-order pairwise summation; bitwise reproducible for a given input.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace cspectra
