#include "autfool/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace autfool {

namespace {
int g_workers = 1;
}  // namespace

void set_worker_count(int workers) { g_workers = workers < 1 ? 1 : workers; }
int worker_count() { return g_workers; }

int parallel_chunks(std::int64_t n) {
    if (n <= 0) return 0;
    return n < 64 ? static_cast<int>(n) : 64;
}

void parallel_for(std::int64_t n,
                  const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
    const int chunks = parallel_chunks(n);
    if (chunks == 0) return;
    const std::int64_t step = (n + chunks - 1) / chunks;
    if (chunks == 1 || g_workers == 1 || n < 2) {
        for (int c = 0; c < chunks; ++c) {
            std::int64_t lo = c * step;
            std::int64_t hi = lo + step < n ? lo + step : n;
            if (lo < hi) fn(c, lo, hi);
        }
        return;
    }
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            int c = next.fetch_add(1);
            if (c >= chunks) break;
            std::int64_t lo = c * step;
            std::int64_t hi = lo + step < n ? lo + step : n;
            if (lo < hi) fn(c, lo, hi);
        }
    };
    std::vector<std::thread> pool;
    int nthreads = g_workers - 1;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

double parallel_sum(std::int64_t n,
                    const std::function<double(int, std::int64_t, std::int64_t)>& fn) {
    const int chunks = parallel_chunks(n);
    if (chunks == 0) return 0.0;
    std::vector<double> partials(chunks, 0.0);
    parallel_for(n, [&](int c, std::int64_t lo, std::int64_t hi) {
        partials[c] = fn(c, lo, hi);
    });
    double total = 0.0;
    for (double p : partials) total += p;  // fixed chunk order
    return total;
}

}  // namespace autfool
