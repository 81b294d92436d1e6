#include "autfool/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace autfool {

std::vector<WeightVector> exact_suffix_expectations(const ProbabilitySpace& space,
                                                    const Automaton& f,
                                                    const WeightVector& w) {
    const int n = space.n();
    const int eta = f.num_states();
    if (static_cast<int>(w.size()) != eta)
        throw ValidationError("weight vector size mismatch");
    std::vector<WeightVector> v(n + 1);
    v[n] = w;
    for (int t = n - 1; t >= 0; --t) {
        const StepDistribution& st = space.step(t);
        v[t].assign(eta, 0.0);
        for (int s = 0; s < eta; ++s) {
            double acc = 0.0;
            for (int i = 0; i < st.support_size(); ++i)
                acc += st.probs[i] * v[t + 1][f.next(s, space.symbol(t, i))];
            v[t][s] = acc;
        }
    }
    return v;
}

std::vector<std::vector<int>> reachable_states(const ProbabilitySpace& space,
                                               const Automaton& f,
                                               const std::vector<int>& starts) {
    const int n = space.n();
    std::vector<std::vector<int>> reach(n + 1);
    std::set<int> cur(starts.begin(), starts.end());
    reach[0].assign(cur.begin(), cur.end());
    for (int t = 0; t < n; ++t) {
        const StepDistribution& st = space.step(t);
        std::set<int> nxt;
        for (int s : cur)
            for (int i = 0; i < st.support_size(); ++i)
                if (st.probs[i] > 0.0) nxt.insert(f.next(s, space.symbol(t, i)));
        cur = std::move(nxt);
        reach[t + 1].assign(cur.begin(), cur.end());
    }
    return reach;
}

namespace {

// Enumerates drivestreams of the suffix window [t, n) and reports, per
// fixed suffix beyond t, the weight spread over the step-t symbol choices.
double lipschitz_at(const ProbabilitySpace& space, const Automaton& f,
                    const WeightVector& w, int s, int t) {
    const int n = space.n();
    const StepDistribution& st = space.step(t);
    // States after the step-t choice.
    std::vector<int> after;
    for (int i = 0; i < st.support_size(); ++i)
        if (st.probs[i] > 0.0) after.push_back(f.next(s, space.symbol(t, i)));
    if (after.size() <= 1) return 0.0;
    // Odometer over the suffix [t+1, n).
    std::vector<int> idx(n - t - 1, 0);
    double best = 0.0;
    for (;;) {
        std::vector<int> states = after;
        bool valid = true;
        for (int j = 0; j < n - t - 1 && valid; ++j) {
            const StepDistribution& sd = space.step(t + 1 + j);
            if (sd.probs[idx[j]] == 0.0) { valid = false; break; }
            Symbol sym = space.symbol(t + 1 + j, idx[j]);
            for (auto& q : states) q = f.next(q, sym);
        }
        if (valid) {
            double lo = w[states[0]], hi = lo;
            for (int q : states) { lo = std::min(lo, w[q]); hi = std::max(hi, w[q]); }
            best = std::max(best, hi - lo);
        }
        int j = 0;
        for (; j < n - t - 1; ++j) {
            if (++idx[j] < space.step(t + 1 + j).support_size()) break;
            idx[j] = 0;
        }
        if (j == n - t - 1) break;
    }
    return best;
}

}  // namespace

AnalysisMetrics analysis_metrics(const ProbabilitySpace& space, const Automaton& f,
                                 const WeightVector& w,
                                 std::uint64_t max_total_drivestreams,
                                 bool with_lipschitz) {
    const int n = space.n();
    const int eta = f.num_states();
    if (with_lipschitz) {
        std::uint64_t total = 1;
        for (int t = 0; t < n; ++t) {
            total *= static_cast<std::uint64_t>(space.step(t).support_size());
            if (total > max_total_drivestreams)
                throw GuardError("analysis_metrics: drivestream count exceeds guard");
        }
    }

    AnalysisMetrics out;
    std::vector<WeightVector> v = exact_suffix_expectations(space, f, w);

    out.confusion.assign(n, std::vector<double>(eta, 0.0));
    for (int t = 0; t < n; ++t) {
        const StepDistribution& st = space.step(t);
        for (int s = 0; s < eta; ++s) {
            double lo = 0.0, hi = 0.0;
            bool first = true;
            for (int i = 0; i < st.support_size(); ++i) {
                if (st.probs[i] == 0.0) continue;
                double val = v[t + 1][f.next(s, space.symbol(t, i))];
                if (first) { lo = hi = val; first = false; }
                lo = std::min(lo, val);
                hi = std::max(hi, val);
            }
            out.confusion[t][s] = hi - lo;
        }
    }

    if (with_lipschitz) {
        out.lipschitz.assign(n, std::vector<double>(eta, 0.0));
        for (int t = 0; t < n; ++t)
            for (int s = 0; s < eta; ++s)
                out.lipschitz[t][s] = lipschitz_at(space, f, w, s, t);
    }

    // Variability from every state as a potential start.
    out.variability.assign(eta, 0.0);
    for (int s = 0; s < eta; ++s) {
        auto reach = reachable_states(space, f, {s});
        double acc = 0.0;
        for (int t = 0; t < n; ++t) {
            double worst = 0.0;
            for (int q : reach[t]) worst = std::max(worst, out.confusion[t][q]);
            acc += worst;
        }
        out.variability[s] = acc;
    }
    return out;
}

double expectation_over(const DrivestreamDistribution& d, const Automaton& f,
                        const ProbabilitySpace& space, int state,
                        const WeightVector& w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.prob(i) == 0.0) continue;
        acc += d.prob(i) * w[walk(f, space, d.entry(i), state)];
    }
    return acc;
}

}  // namespace autfool
