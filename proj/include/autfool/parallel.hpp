#pragma once

#include <cstdint>
#include <functional>

namespace autfool {

// Worker count for parallel sections. Results are bit-identical for any
// value: chunk boundaries depend only on problem size, and all reductions
// combine per-chunk partials in chunk-index order.
void set_worker_count(int workers);
int worker_count();

// Fixed chunk grid: boundaries are a function of n only.
int parallel_chunks(std::int64_t n);

// Runs fn(chunk_index, lo, hi) over the fixed chunk grid. Chunks may be
// executed by any worker; writes must be disjoint per chunk.
void parallel_for(std::int64_t n,
                  const std::function<void(int, std::int64_t, std::int64_t)>& fn);

// Map-reduce: each chunk produces a double partial; partials are summed
// sequentially in chunk order.
double parallel_sum(std::int64_t n,
                    const std::function<double(int, std::int64_t, std::int64_t)>& fn);

}  // namespace autfool
