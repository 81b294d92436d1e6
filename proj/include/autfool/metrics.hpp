#pragma once

#include <vector>

#include "autfool/matrix.hpp"

namespace autfool {

using WeightVector = std::vector<double>;

// Exact suffix expectations V_t(s) = T_{t,n}(s, W) by backward dynamic
// programming. V[n] = W. Ground-truth oracle wherever beta = 0 is needed.
std::vector<WeightVector> exact_suffix_expectations(const ProbabilitySpace& space,
                                                    const Automaton& f,
                                                    const WeightVector& w);

// States reachable at each time from the given start states, walking the
// full supports of the space. reach[t] is a sorted list; reach[0] = starts.
std::vector<std::vector<int>> reachable_states(const ProbabilitySpace& space,
                                               const Automaton& f,
                                               const std::vector<int>& starts);

struct AnalysisMetrics {
    // lipschitz[t][s], confusion[t][s] for t in [0, n); variability[s].
    std::vector<std::vector<double>> lipschitz;
    std::vector<std::vector<double>> confusion;
    std::vector<double> variability;
};

// Exhaustive analysis oracle. Lipschitz values enumerate whole suffix
// drivestreams and are guarded by max_total_drivestreams (product over all
// steps of support size); confusion and variability come from the exact
// suffix DP plus reachability and stay polynomial.
AnalysisMetrics analysis_metrics(const ProbabilitySpace& space, const Automaton& f,
                                 const WeightVector& w,
                                 std::uint64_t max_total_drivestreams = 1ull << 20,
                                 bool with_lipschitz = true);

// Exact T_D(s, w) by enumerating the support.
double expectation_over(const DrivestreamDistribution& d, const Automaton& f,
                        const ProbabilitySpace& space, int state,
                        const WeightVector& w);

}  // namespace autfool
