#include "arclab/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace arclab {

namespace {
int g_threads = 1;
}

void set_worker_threads(int n) { g_threads = n < 1 ? 1 : n; }
int worker_threads() { return g_threads; }

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    int nt = g_threads;
    if (nt <= 1 || n < 256) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    const size_t chunk = 64;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                size_t start = next.fetch_add(chunk);
                if (start >= n) return;
                size_t stop = std::min(n, start + chunk);
                for (size_t i = start; i < stop; ++i) fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace arclab
