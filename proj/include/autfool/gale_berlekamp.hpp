#pragma once

#include "autfool/counter_merge.hpp"
#include "autfool/counters.hpp"

namespace autfool {

struct GBInstance {
    int n = 0;
    std::vector<std::vector<int>> a;  // entries exactly +/-1

    void validate() const;
};

struct GBConfig {
    double epsilon_scale = 1.0;  // eps = scale / sqrt(n log n)
    double b_scale = 3.0;        // span multiplier
    std::size_t size_cap = 2048; // REDUCE output cap per merge
    double reduce_c = 4.0;
};

struct GBResult {
    std::vector<int> x, y;  // +/-1
    long long imbalance = 0;
    double certified_bound = 0.0;
    std::size_t distribution_size = 0;
    double ratio_to_n32 = 0.0;  // imbalance / n^{3/2}
    double epsilon = 0.0;
    double beta = 0.0;
    long long span = 0;
    double expected_row_weight = 0.0;     // E_Omega[W~] per row
    double max_row_variability = 0.0;
    double realized_drift = 0.0;
};

// Row imbalance sum_{i,j} A_ij x_i y_j.
long long imbalance(const GBInstance& inst, const std::vector<int>& x,
                    const std::vector<int>& y);

// Exact E|S_n| for S_n a sum of n independent uniform +/-1 steps.
double gb_expected_weight_oracle(int n);

// Derandomized switching game: fool the n row counters simultaneously,
// search the distribution exhaustively, pick x by the sign rule.
GBResult run_gb(const GBInstance& inst, const GBConfig& cfg);

}  // namespace autfool
