#pragma once

#include <string>
#include <vector>

namespace autfool {

struct BenchRow {
    std::string suite;
    std::string name;
    int workers = 1;
    double seconds = 0.0;
    std::string metric;
    double value = 0.0;
};

// Seedless desk-scale measurements: GB scaling, LAP solves, FFT vs direct
// suffix expectations, and a worker-determinism check.
std::vector<BenchRow> run_bench(const std::string& suite);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace autfool
