#include "autfool/prediction.hpp"

#include <cmath>

namespace autfool {

namespace {

// Level-indexed dense arrays: level k holds 2^k slots. Probabilities and
// conditional expectations are accumulated bottom-up from the leaves.
class GenericPrediction final : public PredictionStructure {
  public:
    GenericPrediction(const DrivestreamDistribution& d, const Automaton& f,
                      const ProbabilitySpace& space, const WeightVector& w)
        : dist_(d), eta_(f.num_states()) {
        depth_ = d.depth();
        const std::size_t leaves = d.size();
        probs_.resize(depth_ + 1);
        expect_.resize(depth_ + 1);
        for (int k = 0; k <= depth_; ++k) {
            probs_[k].assign(1ull << k, 0.0);
            expect_[k].assign((1ull << k) * eta_, 0.0);
        }
        // Leaves: single-entry conditionals are just w at the final state.
        for (std::size_t j = 0; j < leaves; ++j) {
            double p = d.prob(j);
            probs_[depth_][j] = p;
            if (p == 0.0) continue;
            std::vector<int> map = state_map(f, space, d.entry(j));
            for (int s = 0; s < eta_; ++s)
                expect_[depth_][j * eta_ + s] = w[map[s]];
        }
        // Internal nodes: p(b*) = p(b0*) + p(b1*); expectations mix by mass.
        for (int k = depth_ - 1; k >= 0; --k) {
            for (std::uint64_t b = 0; b < (1ull << k); ++b) {
                double p0 = probs_[k + 1][2 * b], p1 = probs_[k + 1][2 * b + 1];
                probs_[k][b] = p0 + p1;
                if (probs_[k][b] == 0.0) continue;
                for (int s = 0; s < eta_; ++s) {
                    double num = p0 * expect_[k + 1][(2 * b) * eta_ + s] +
                                 p1 * expect_[k + 1][(2 * b + 1) * eta_ + s];
                    expect_[k][b * eta_ + s] = num / probs_[k][b];
                }
            }
        }
    }

    int depth() const override { return depth_; }

    double query_prob(std::uint64_t b, int len) const override {
        check(b, len);
        return probs_[len][b];
    }

    double query_expect(std::uint64_t b, int len, int state) const override {
        check(b, len);
        if (probs_[len][b] == 0.0) return 0.0;
        return expect_[len][b * eta_ + state];
    }

    Drivestream materialize(std::uint64_t index) const override {
        return dist_.entry(index);
    }

    int window_t() const override { return dist_.t(); }
    int window_h() const override { return dist_.h(); }

  private:
    void check(std::uint64_t b, int len) const {
        if (len < 0 || len > depth_) throw ValidationError("bitstring too long");
        if (b >= (1ull << len)) throw ValidationError("bitstring value out of range");
    }

    DrivestreamDistribution dist_;
    int eta_;
    int depth_;
    std::vector<std::vector<double>> probs_;
    std::vector<std::vector<double>> expect_;
};

class ProductPrediction final : public PredictionStructure {
  public:
    ProductPrediction(const DrivestreamDistribution& d1,
                      const DrivestreamDistribution& d2, const Automaton& f,
                      const ProbabilitySpace& space, const WeightVector& w)
        : d1_(d1), d2_(d2), eta_(f.num_states()) {
        if (d1.t() + d1.h() != d2.t() || d1.h() != d2.h())
            throw ValidationError("product windows must be adjacent with equal horizon");
        l1_ = d1.depth();
        l2_ = d2.depth();
        q2_ = build_generic(d2, f, space, w);
        // Final-state maps for every D1 entry.
        maps1_.resize(d1.size());
        for (std::size_t j = 0; j < d1.size(); ++j)
            maps1_[j] = state_map(f, space, d1.entry(j));
        // Derived weight w2(s) = T_{D2}(s, w), then Q(D1, w2).
        WeightVector w2(eta_);
        for (int s = 0; s < eta_; ++s) w2[s] = q2_->query_expect(0, 0, s);
        q1_ = build_generic(d1, f, space, w2);
    }

    int depth() const override { return l1_ + l2_; }

    double query_prob(std::uint64_t b, int len) const override {
        if (len <= l1_) return q1_->query_prob(b, len);
        if (len > depth()) throw ValidationError("bitstring too long");
        std::uint64_t b1 = b >> (len - l1_);
        std::uint64_t b2 = b & ((1ull << (len - l1_)) - 1);
        return q1_->query_prob(b1, l1_) * q2_->query_prob(b2, len - l1_);
    }

    double query_expect(std::uint64_t b, int len, int state) const override {
        if (len <= l1_) return q1_->query_expect(b, len, state);
        if (len > depth()) throw ValidationError("bitstring too long");
        std::uint64_t b1 = b >> (len - l1_);
        std::uint64_t b2 = b & ((1ull << (len - l1_)) - 1);
        if (q1_->query_prob(b1, l1_) == 0.0) return 0.0;
        return q2_->query_expect(b2, len - l1_, maps1_[b1][state]);
    }

    Drivestream materialize(std::uint64_t index) const override {
        std::uint64_t j1 = index >> l2_;
        std::uint64_t j2 = index & ((1ull << l2_) - 1);
        const Drivestream& a = d1_.entry(j1);
        const Drivestream& b = d2_.entry(j2);
        Drivestream out;
        out.t = a.t;
        out.h = a.h + b.h;
        out.sym_indices = a.sym_indices;
        out.sym_indices.insert(out.sym_indices.end(), b.sym_indices.begin(),
                               b.sym_indices.end());
        return out;
    }

    int window_t() const override { return d1_.t(); }
    int window_h() const override { return d1_.h() + d2_.h(); }

  private:
    DrivestreamDistribution d1_, d2_;
    int eta_, l1_ = 0, l2_ = 0;
    std::unique_ptr<PredictionStructure> q1_, q2_;
    std::vector<std::vector<int>> maps1_;
};

}  // namespace

std::unique_ptr<PredictionStructure> build_generic(const DrivestreamDistribution& d,
                                                   const Automaton& f,
                                                   const ProbabilitySpace& space,
                                                   const WeightVector& w) {
    return std::make_unique<GenericPrediction>(d, f, space, w);
}

std::unique_ptr<PredictionStructure> build_product(const DrivestreamDistribution& d1,
                                                   const DrivestreamDistribution& d2,
                                                   const Automaton& f,
                                                   const ProbabilitySpace& space,
                                                   const WeightVector& w) {
    return std::make_unique<ProductPrediction>(d1, d2, f, space, w);
}

}  // namespace autfool
