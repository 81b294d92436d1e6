#pragma once

#include <memory>

#include "autfool/lattice.hpp"
#include "autfool/prediction.hpp"

namespace autfool {

struct ReduceConfig {
    double epsilon = 0.25;     // in (0, 0.5]
    double c = 4.0;            // constant in m = ceil(C l^2 log eta / eps^2)
    std::size_t size_cap = 0;  // 0 = uncapped; capping forfeits the nominal bound

    void validate() const;
};

struct ReduceDiagnostics {
    std::size_t m = 0;
    double c_effective = 0.0;
    bool capped = false;
    int levels = 0;
    // Realized per-level drift |sum_b A_kb (u_b - v_b)| / m, maxed over rows.
    // This equals |T_{D_{i+1}}(s,w) - T_{D_i}(s,w)| exactly.
    std::vector<double> level_drift;
    // Per tracked row, summed over levels: a certified bound on
    // |T_D(row) - T_E(row)| for this run.
    std::vector<double> row_drift;
    // Per level, per tracked row drift (the telescoping tests read this).
    std::vector<std::vector<double>> level_row_drift;
};

// Feeds one REDUCE run: prefix-split expectation differences per tracked
// state, branch sampling rates, and entry materialization.
class ReduceSource {
  public:
    virtual ~ReduceSource() = default;
    virtual int depth() const = 0;             // lg |E|
    virtual int eta() const = 0;               // automaton state count
    virtual std::size_t num_rows() const = 0;  // tracked states
    virtual const std::vector<int>& row_states() const = 0;
    // For every prefix (all of length `level`) fill the column
    // a[r] = T_{E[b1*]}(state_r, w) - T_{E[b0*]}(state_r, w) into the
    // column-major slab and u_out[c] = p(b1*)/p(b*) (0 when the denominator
    // vanishes).
    virtual void fill_columns(const std::vector<std::uint64_t>& prefixes, int level,
                              double* slab, double* u_out) = 0;
    virtual double index_prob(std::uint64_t index) const = 0;
    virtual std::uint64_t first_real_index() const = 0;
    virtual Drivestream materialize(std::uint64_t index) const = 0;
    virtual int window_t() const = 0;
    virtual int window_h() const = 0;
};

// Source backed by a PredictionStructure (generic or virtual product).
class PredictionReduceSource final : public ReduceSource {
  public:
    PredictionReduceSource(std::shared_ptr<const PredictionStructure> q, int eta,
                           std::vector<int> rows);
    int depth() const override { return q_->depth(); }
    int eta() const override { return eta_; }
    std::size_t num_rows() const override { return rows_.size(); }
    const std::vector<int>& row_states() const override { return rows_; }
    void fill_columns(const std::vector<std::uint64_t>& prefixes, int level,
                      double* slab, double* u_out) override;
    double index_prob(std::uint64_t index) const override {
        return q_->query_prob(index, q_->depth());
    }
    std::uint64_t first_real_index() const override;
    Drivestream materialize(std::uint64_t index) const override {
        return q_->materialize(index);
    }
    int window_t() const override { return q_->window_t(); }
    int window_h() const override { return q_->window_h(); }

  private:
    std::shared_ptr<const PredictionStructure> q_;
    int eta_;
    std::vector<int> rows_;
};

// Algorithm: iteratively fix bit levels of the index multiset H via the
// real-valued LAP; output is uniform of size m.
DrivestreamDistribution reduce(ReduceSource& src, const ReduceConfig& cfg,
                               ReduceDiagnostics* diag = nullptr);

// Convenience overload over an explicit distribution, tracking all states.
DrivestreamDistribution reduce(const DrivestreamDistribution& e, const Automaton& f,
                               const ProbabilitySpace& space, const WeightVector& w,
                               const ReduceConfig& cfg,
                               ReduceDiagnostics* diag = nullptr);

// Exact sensitivity alpha(s, w, E): weight spread over E's support.
double sensitivity(const Automaton& f, const ProbabilitySpace& space,
                   const DrivestreamDistribution& e, int state, const WeightVector& w,
                   std::uint64_t guard = 1ull << 20);

// Size rule m = ceil(C l^2 log eta / eps^2) plus the arithmetic self-check
// that the per-level LAP bound fits within eps/l; doubles C until it does.
std::size_t reduce_output_size(double epsilon, int levels, int eta,
                               std::size_t tracked_rows, double& c_in_out);

}  // namespace autfool
