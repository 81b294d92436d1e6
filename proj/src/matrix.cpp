#include "autfool/matrix.hpp"

#include <cmath>

namespace autfool {

namespace {
std::atomic<std::int64_t> g_entries{0};
}

DrivestreamDistribution::DrivestreamDistribution(int t, int h,
                                                 std::vector<Drivestream> entries,
                                                 std::vector<double> probs)
    : t_(t), h_(h), entries_(std::move(entries)), probs_(std::move(probs)) {
    if (entries_.empty()) throw ValidationError("empty drivestream distribution");
    if (entries_.size() != probs_.size())
        throw ValidationError("drivestream distribution entries/probs mismatch");
    std::size_t target = next_pow2(entries_.size());
    while (entries_.size() < target) {
        entries_.push_back(entries_[0]);
        probs_.push_back(0.0);
    }
    depth_ = lg2_exact(entries_.size());
    first_real_ = 0;
    while (first_real_ < probs_.size() && probs_[first_real_] == 0.0) ++first_real_;
    if (first_real_ == probs_.size())
        throw ValidationError("drivestream distribution has no positive-probability entry");
    g_entries += static_cast<std::int64_t>(entries_.size());
}

DrivestreamDistribution DrivestreamDistribution::from_step(const ProbabilitySpace& space,
                                                           int t) {
    const StepDistribution& st = space.step(t);
    std::vector<Drivestream> entries;
    std::vector<double> probs;
    entries.reserve(st.support_size());
    for (int i = 0; i < st.support_size(); ++i) {
        Drivestream d;
        d.t = t;
        d.h = 1;
        d.sym_indices = {i};
        entries.push_back(std::move(d));
        probs.push_back(st.probs[i]);
    }
    return DrivestreamDistribution(t, 1, std::move(entries), std::move(probs));
}

void DrivestreamDistribution::validate() const {
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw ValidationError("negative drivestream probability");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > tol().prob_sum)
        throw ValidationError("drivestream probabilities do not sum to 1");
    for (const auto& e : entries_) {
        if (e.t != t_ || e.h != h_)
            throw ValidationError("drivestream window mismatch");
    }
}

std::int64_t DrivestreamDistribution::entries_allocated() { return g_entries.load(); }

int walk(const Automaton& f, const ProbabilitySpace& space, const Drivestream& r,
         int state) {
    int s = state;
    for (int j = 0; j < r.h; ++j) s = f.next(s, r.symbol_at(space, j));
    return s;
}

std::vector<int> state_map(const Automaton& f, const ProbabilitySpace& space,
                           const Drivestream& r) {
    const int eta = f.num_states();
    if (r.h <= 1) {
        std::vector<int> out(eta);
        if (r.h == 0) {
            for (int s = 0; s < eta; ++s) out[s] = s;
        } else {
            Symbol sym = r.symbol_at(space, 0);
            for (int s = 0; s < eta; ++s) out[s] = f.next(s, sym);
        }
        return out;
    }
    // Recursive doubling: compose the two half-window maps.
    int h1 = r.h / 2;
    Drivestream left{r.t, h1, {r.sym_indices.begin(), r.sym_indices.begin() + h1}};
    Drivestream right{r.t + h1, r.h - h1,
                      {r.sym_indices.begin() + h1, r.sym_indices.end()}};
    std::vector<int> ml = state_map(f, space, left);
    std::vector<int> mr = state_map(f, space, right);
    std::vector<int> out(eta);
    for (int s = 0; s < eta; ++s) out[s] = mr[ml[s]];
    return out;
}

TransitionMatrix transition_matrix(const Automaton& f, const ProbabilitySpace& space,
                                   const DrivestreamDistribution& d) {
    const int eta = f.num_states();
    TransitionMatrix m;
    m.t = d.t();
    m.h = d.h();
    m.eta = eta;
    m.rows.assign(static_cast<std::size_t>(eta) * eta, 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        double p = d.prob(i);
        if (p == 0.0) continue;
        std::vector<int> map = state_map(f, space, d.entry(i));
        for (int s = 0; s < eta; ++s) m.rows[static_cast<std::size_t>(s) * eta + map[s]] += p;
    }
    return m;
}

double expected_weight(const TransitionMatrix& m, int state,
                       const std::vector<double>& w) {
    if (static_cast<int>(w.size()) != m.eta)
        throw ValidationError("weight vector size mismatch");
    if (state < 0 || state >= m.eta) throw ValidationError("state out of range");
    double acc = 0.0;
    const double* row = &m.rows[static_cast<std::size_t>(state) * m.eta];
    for (int s = 0; s < m.eta; ++s) acc += row[s] * w[s];
    return acc;
}

void TransitionMatrix::validate() const {
    for (int s = 0; s < eta; ++s) {
        double sum = 0.0;
        for (int s2 = 0; s2 < eta; ++s2) {
            double v = rows[static_cast<std::size_t>(s) * eta + s2];
            if (!(v >= 0.0)) throw ValidationError("negative transition probability");
            sum += v;
        }
        if (std::fabs(sum - 1.0) > tol().row_stochastic)
            throw ValidationError("transition matrix row does not sum to 1");
    }
}

}  // namespace autfool
