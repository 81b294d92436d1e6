#pragma once

#include <vector>

#include "autfool/drivestream.hpp"

namespace autfool {

// Row-stochastic transition matrix T_D for one window or distribution.
struct TransitionMatrix {
    int t = 0, h = 0, eta = 0;
    std::vector<double> rows;  // eta x eta, row-major

    double at(int s, int s2) const { return rows[static_cast<std::size_t>(s) * eta + s2]; }
    void validate() const;
};

// Final states F(r, s) for every start state, by recursive doubling.
std::vector<int> state_map(const Automaton& f, const ProbabilitySpace& space,
                           const Drivestream& r);

TransitionMatrix transition_matrix(const Automaton& f, const ProbabilitySpace& space,
                                   const DrivestreamDistribution& d);

// Inner product of row `state` with w.
double expected_weight(const TransitionMatrix& m, int state,
                       const std::vector<double>& w);

}  // namespace autfool
