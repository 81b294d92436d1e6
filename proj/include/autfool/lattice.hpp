#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "autfool/common.hpp"

namespace autfool {

// Lattice Approximation Problem: round u in [0,1]^n to v in {0,1}^n keeping
// every row discrepancy |sum_j A_kj (u_j - v_j)| small.
struct LapInstance {
    std::size_t m = 0, n = 0;
    std::vector<std::vector<double>> rows;  // m rows of n reals
    std::vector<double> u;

    void validate() const;
};

struct LapSolution {
    std::vector<std::uint8_t> v;
    std::vector<double> disc;      // D_k = |sum_j A_kj (u_j - v_j)|
    std::vector<double> mu;        // sum_j A_kj u_j (unit path)
    std::vector<double> mu_tilde;  // sum_j |A_kj| u_j
    std::vector<double> mu_pos;    // sum over positive entries of A_kj u_j
    std::vector<double> mu_neg;    // sum over negative entries of |A_kj| u_j
    std::vector<double> delta;     // max_j |A_kj|
};

// Bound certified by the estimator on a unit-entry LAP with est_rows rows:
// sqrt(3 mu ln(4 R)) + 2 ln(4 R).
double lap_unit_bound(double mu, std::size_t est_rows);

// Certified bound for the real-valued path (row split into +/- parts,
// solved at 2m rows): delta * (bound(mu_pos/delta) + bound(mu_neg/delta)).
double lap_real_bound(double delta, double mu_pos, double mu_neg, std::size_t m);

// Derandomized rounding by conditional expectations over two-sided Chernoff
// pessimistic estimators, columns fixed left to right. Requires A in [0,1].
LapSolution solve_unit(const LapInstance& inst);

// Arbitrary real A: rows are rescaled by delta_k and split into positive and
// negative parts; zero rows are dropped before splitting.
LapSolution solve_real(const LapInstance& inst);

std::vector<double> discrepancy(const std::vector<std::vector<double>>& a,
                                const std::vector<double>& u,
                                const std::vector<std::uint8_t>& v);

// --- column-streaming core, shared with the REDUCE inner loop ---

enum class LapMode { Unit, Split };

struct CeColumnView {
    const double* a = nullptr;  // one value per row
    double u = 0.0;
};

struct CeDiagnostics {
    std::vector<double> signed_sum;  // per row: sum_j A_kj (u_j - v_j)
    std::vector<double> delta, mu_pos, mu_neg;
};

// col(j) is called twice per column (a sizing pass and the rounding pass)
// and must return identical data both times.
std::vector<std::uint8_t> ce_round(std::size_t rows, std::size_t cols, LapMode mode,
                                   const std::function<CeColumnView(std::size_t)>& col,
                                   CeDiagnostics* diag);

}  // namespace autfool
