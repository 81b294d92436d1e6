#pragma once

#include <array>

#include "autfool/reduce.hpp"

namespace autfool {

// Dense values over an integer box (DIM = 1 or 2), axis 0 slowest.
template <int DIM>
struct LatticeBox {
    std::array<long long, DIM> lo{}, hi{};  // inclusive
    std::vector<double> v;

    std::size_t size() const {
        std::size_t n = 1;
        for (int a = 0; a < DIM; ++a)
            n *= static_cast<std::size_t>(hi[a] - lo[a] + 1);
        return n;
    }
    bool contains(const std::array<long long, DIM>& p) const {
        for (int a = 0; a < DIM; ++a)
            if (p[a] < lo[a] || p[a] > hi[a]) return false;
        return true;
    }
    std::size_t index(const std::array<long long, DIM>& p) const {
        std::size_t idx = 0;
        for (int a = 0; a < DIM; ++a)
            idx = idx * static_cast<std::size_t>(hi[a] - lo[a] + 1) +
                  static_cast<std::size_t>(p[a] - lo[a]);
        return idx;
    }
    double at(const std::array<long long, DIM>& p) const {
        if (!contains(p)) throw std::logic_error("lattice box lookup out of range");
        return v[index(p)];
    }
    void alloc() { v.assign(size(), 0.0); }
};

// One counter (DIM=1) or counter-pair (DIM=2) block inside the product
// automaton being fooled. Increments must already fold in anchor drift.
// The merge machinery assumes the block's truncation bound is never hit on
// the tracked domain (the apps construct spans to guarantee this) so walks
// reduce to increment sums.
template <int DIM>
struct MergeBlock {
    // inc[a][t][sym_index]
    std::array<std::vector<std::vector<long long>>, DIM> inc;
    // V-hat_{t+2h} restricted to the reachable box at the window end.
    LatticeBox<DIM> w_end;
    // Tracked states (the LAP rows of this block).
    std::vector<std::array<long long, DIM>> rows;
};

template <int DIM>
class CounterMergeSource final : public ReduceSource {
  public:
    CounterMergeSource(const ProbabilitySpace& space, const DrivestreamDistribution& d1,
                       const DrivestreamDistribution& d2,
                       std::vector<MergeBlock<DIM>> blocks, int eta_total);

    int depth() const override { return l1_ + l2_; }
    int eta() const override { return eta_; }
    std::size_t num_rows() const override { return total_rows_; }
    const std::vector<int>& row_states() const override { return row_ids_; }
    void fill_columns(const std::vector<std::uint64_t>& prefixes, int level,
                      double* slab, double* u_out) override;
    double index_prob(std::uint64_t index) const override;
    std::uint64_t first_real_index() const override;
    Drivestream materialize(std::uint64_t index) const override;
    int window_t() const override { return d1_.t(); }
    int window_h() const override { return d1_.h() + d2_.h(); }

  private:
    using Point = std::array<long long, DIM>;

    double range_prob1(std::uint64_t lo, std::uint64_t hi) const {
        return pfx1_[hi] - pfx1_[lo];
    }
    double range_prob2(std::uint64_t lo, std::uint64_t hi) const {
        return pfx2_[hi] - pfx2_[lo];
    }

    DrivestreamDistribution d1_, d2_;
    int l1_, l2_, eta_;
    std::vector<MergeBlock<DIM>> blocks_;
    std::size_t total_rows_ = 0;
    std::vector<int> row_ids_;
    std::vector<std::size_t> block_row_begin_;

    // Per block: per-entry total increments of each half.
    std::vector<std::vector<Point>> inc1_, inc2_;
    // Per block: marginalized weight w2(x) = T_{D2}(x, w_end) over the box
    // of points reachable at the window midpoint from the tracked rows.
    std::vector<LatticeBox<DIM>> w_mid_;
    std::vector<double> pfx1_, pfx2_;  // prefix sums of entry probabilities
};

using CounterMergeSource1D = CounterMergeSource<1>;
using CounterMergeSource2D = CounterMergeSource<2>;

}  // namespace autfool
