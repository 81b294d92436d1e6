#pragma once

#include <functional>
#include <memory>

#include "autfool/reduce.hpp"

namespace autfool {

enum class VhatMode { ExactDp, MatrixProduct, ApplicationSupplied };

// Approximate suffix-expectation vectors V-hat_0..V-hat_n with a declared
// uniform error bound beta against the exact V_t.
struct VhatProvider {
    std::vector<WeightVector> v;  // n + 1 vectors
    double beta = 0.0;
    VhatMode mode = VhatMode::ExactDp;
};

// Backward dynamic program; beta is a float-accumulation bound.
VhatProvider compute_vhat_exact_dp(const ProbabilitySpace& space, const Automaton& f,
                                   const WeightVector& w);

// Recursive dyadic transition matrices (naive cubic products), then
// top-down suffix vectors.
VhatProvider compute_vhat_generic(const ProbabilitySpace& space, const Automaton& f,
                                  const WeightVector& w);

struct FoolConfig {
    double epsilon = 0.25;
    double reduce_c = 4.0;
    std::size_t reduce_size_cap = 0;
    // Track only states reachable from the automaton's start state(s); by
    // default every state is a LAP row in every merge.
    bool rows_from_start_reachability = false;
    // How suffix-expectation vectors are produced when none are supplied.
    VhatMode vhat_mode = VhatMode::ExactDp;

    double delta(int n) const;  // epsilon / (20 (1 + lg n))
};

struct FoolResult {
    DrivestreamDistribution d;
    double delta = 0.0;
    double beta = 0.0;
    bool capped = false;
    std::vector<std::size_t> level_sizes;      // |D_{i,0}| per level
    double realized_drift = 0.0;               // sum over merges of max row drift
    std::vector<double> merge_drift;           // per merge
};

// Builds the per-merge REDUCE source for D_{i,t} x D_{i,t+h}; the factory
// resolves V-hat_{t+2h} itself.
using MergeSourceFactory = std::function<std::unique_ptr<ReduceSource>(
    const DrivestreamDistribution& d1, const DrivestreamDistribution& d2, int level,
    int t)>;

// The level loop alone; callers provide the merge factory.
FoolResult fool_core(const ProbabilitySpace& space, int n, double epsilon,
                     const FoolConfig& cfg, const MergeSourceFactory& factory);

// Full generic pipeline. Pads the space to a power of two; when vhat is
// null it is computed by the exact DP (beta from float accounting).
FoolResult fool(const ProbabilitySpace& space, const Automaton& f,
                const WeightVector& w, const FoolConfig& cfg,
                const VhatProvider* vhat = nullptr);

struct FoolVerifyRow {
    int state = 0;
    double err = 0.0, bound = 0.0, slack = 0.0;
};

struct FoolVerifyReport {
    std::vector<FoolVerifyRow> rows;
    double min_slack = 0.0;
    bool ok = false;
};

// Checks |T_D(s,W) - T_Omega(s,W)| <= eps*V(s) + 3*beta*n per start state.
// Variability comes from the exact confusion DP unless supplied.
FoolVerifyReport verify_fooling(const DrivestreamDistribution& d,
                                const ProbabilitySpace& space, const Automaton& f,
                                const WeightVector& w, double epsilon, double beta,
                                const std::vector<double>* variability = nullptr,
                                const std::vector<int>* states = nullptr);

// Float-accumulation bound used when a DP-computed vhat stands in for the
// exact vectors.
double vhat_float_beta(int n, int eta, const WeightVector& w);

}  // namespace autfool
