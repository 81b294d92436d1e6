#include "autfool/counters.hpp"

#include <cmath>

namespace autfool {

CounterSpec CounterSpec::build(const ProbabilitySpace& space,
                               std::vector<std::vector<long long>> f, double delta,
                               double b_scale, std::optional<long long> b_floor) {
    const int n = space.n();
    if (static_cast<int>(f.size()) != n)
        throw ValidationError("counter table length must match space");
    CounterSpec spec;
    spec.f = std::move(f);
    spec.delta = delta;
    spec.b_scale = b_scale;
    spec.mu.resize(n);
    spec.m_t.resize(n);
    spec.kappa = 0.0;
    for (int t = 0; t < n; ++t) {
        const StepDistribution& st = space.step(t);
        if (static_cast<int>(spec.f[t].size()) != st.support_size())
            throw ValidationError("counter table does not match step support");
        double mean = 0.0;
        for (int i = 0; i < st.support_size(); ++i)
            mean += st.probs[i] * static_cast<double>(spec.f[t][i]);
        spec.mu[t] = mean;
        double mt = 0.0, var = 0.0;
        for (int i = 0; i < st.support_size(); ++i) {
            double dev = static_cast<double>(spec.f[t][i]) - mean;
            mt = std::max(mt, std::fabs(dev));
            var += st.probs[i] * dev * dev;
        }
        spec.m_t[t] = mt;
        spec.kappa += var;
        spec.m_max = std::max(spec.m_max, mt);
    }
    spec.anchors.assign(n + 1, 0);
    double acc = 0.0;
    for (int t = 0; t < n; ++t) {
        acc += spec.mu[t];
        spec.anchors[t + 1] = round_half_even(acc);
    }
    if (!(delta > 0.0)) throw ValidationError("counter delta must be positive");
    double b_formula = b_scale * (1.0 + spec.m_max + std::sqrt(spec.kappa)) *
                       std::log(static_cast<double>(n) / delta);
    spec.b = static_cast<long long>(std::ceil(b_formula));
    if (spec.b < 1) spec.b = 1;
    if (b_floor && *b_floor > spec.b) spec.b = *b_floor;
    return spec;
}

TruncatedCounterAutomaton::TruncatedCounterAutomaton(CounterSpec spec)
    : Automaton(static_cast<int>(2 * spec.b + 2), static_cast<int>(spec.b)),
      spec_(std::move(spec)) {}

int TruncatedCounterAutomaton::next(int state, const Symbol& sym) const {
    if (state == bot_state()) return bot_state();
    if (sym.step >= static_cast<int>(spec_.f.size())) return state;  // padding
    long long c = counter_of(state) + spec_.increment(sym.step, sym.index);
    if (c > spec_.b || c < -spec_.b) return bot_state();
    return state_of(c);
}

TruthfulCounterAutomaton::TruthfulCounterAutomaton(CounterSpec spec,
                                                   long long range_guard)
    : Automaton(0, 0), spec_(std::move(spec)) {
    long long lo = 0, hi = 0, cur_lo = 0, cur_hi = 0;
    for (std::size_t t = 0; t < spec_.f.size(); ++t) {
        long long mn = spec_.increment(static_cast<int>(t), 0);
        long long mx = mn;
        for (std::size_t i = 1; i < spec_.f[t].size(); ++i) {
            long long v = spec_.increment(static_cast<int>(t), static_cast<int>(i));
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        cur_lo += mn;
        cur_hi += mx;
        lo = std::min(lo, cur_lo);
        hi = std::max(hi, cur_hi);
    }
    inner_range_ = std::max(std::llabs(lo), std::llabs(hi));
    // Walks may start anywhere inside the inner envelope, so the state
    // space doubles it to stay total.
    range_ = 2 * inner_range_;
    if (2 * range_ + 1 > range_guard)
        throw GuardError("truthful counter range exceeds guard");
    num_states_ = static_cast<int>(2 * range_ + 1);
    start_state_ = static_cast<int>(range_);
}

int TruthfulCounterAutomaton::next(int state, const Symbol& sym) const {
    if (sym.step >= static_cast<int>(spec_.f.size())) return state;
    long long c = counter_of(state) + spec_.increment(sym.step, sym.index);
    // Keep the transition total at the outer band; walks that start inside
    // the inner envelope never reach the clamp, so every value the
    // truncation report compares stays exact.
    if (c > range_) c = range_;
    if (c < -range_) c = -range_;
    return state_of(c);
}

double potential(long long c, long long b) {
    double bb = static_cast<double>(b);
    double x = (2.0 * bb / 3.0 - std::fabs(static_cast<double>(c))) / (bb / 3.0);
    if (x > 1.0) return 1.0;
    if (x < 0.0) return 0.0;
    return x;
}

double potential_bot() { return 0.0; }

WeightVector damped_weight(const std::function<double(long long)>& w,
                           const CounterSpec& spec) {
    WeightVector out(2 * spec.b + 2, 0.0);
    for (long long c = -spec.b; c <= spec.b; ++c)
        out[c + spec.b] = potential(c, spec.b) * w(c);
    out[2 * spec.b + 1] = 0.0;
    return out;
}

std::vector<std::pair<long long, long long>> counter_reach(const CounterSpec& spec) {
    std::vector<std::pair<long long, long long>> out;
    out.emplace_back(0, 0);
    long long lo = 0, hi = 0;
    for (std::size_t t = 0; t < spec.f.size(); ++t) {
        long long mn = spec.increment(static_cast<int>(t), 0);
        long long mx = mn;
        for (std::size_t i = 1; i < spec.f[t].size(); ++i) {
            long long v = spec.increment(static_cast<int>(t), static_cast<int>(i));
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        lo += mn;
        hi += mx;
        out.emplace_back(lo, hi);
    }
    return out;
}

double bernstein_escape_estimate(const ProbabilitySpace& space, const CounterSpec& spec,
                                 int samples, std::uint64_t seed) {
    const int n = space.n();
    SplitMix64 rng(seed);
    int escapes = 0;
    double threshold = 0.15 * static_cast<double>(spec.b);
    for (int it = 0; it < samples; ++it) {
        double prefix = 0.0, mn = 0.0, mx = 0.0;
        for (int t = 0; t < n; ++t) {
            const StepDistribution& st = space.step(t);
            double u = rng.uniform(), acc = 0.0;
            int pick = st.support_size() - 1;
            for (int i = 0; i < st.support_size(); ++i) {
                acc += st.probs[i];
                if (u < acc) { pick = i; break; }
            }
            prefix += static_cast<double>(spec.f[t][pick]) - spec.mu[t];
            mn = std::min(mn, prefix);
            mx = std::max(mx, prefix);
        }
        if (mx - mn >= threshold) ++escapes;
    }
    double p = static_cast<double>(escapes) / samples;
    double sigma = std::sqrt(std::max(p, 1.0 / samples) * (1.0 - p) / samples);
    return p + 3.0 * sigma + 3.0 / samples;
}

TruncationReport truncation_error_report(const ProbabilitySpace& space,
                                         const CounterSpec& spec,
                                         const std::function<double(long long)>& w,
                                         long long range_guard, int mc_samples) {
    const int n = space.n();
    TruncatedCounterAutomaton trunc(spec);
    TruthfulCounterAutomaton truth(spec, range_guard);

    // W~ on both state spaces; on the truthful automaton, |c| > B plays the
    // reject role (phi vanishes there).
    WeightVector wt_trunc = damped_weight(w, spec);
    WeightVector wt_truth(truth.num_states(), 0.0);
    for (int s = 0; s < truth.num_states(); ++s) {
        long long c = truth.counter_of(s);
        if (c >= -spec.b && c <= spec.b) wt_truth[s] = potential(c, spec.b) * w(c);
    }

    std::vector<WeightVector> v_trunc = exact_suffix_expectations(space, trunc, wt_trunc);
    std::vector<WeightVector> v_truth = exact_suffix_expectations(space, truth, wt_truth);

    // Start states considered: the inner envelope, from which every walk
    // stays inside the doubled truthful state space.
    const long long inner = truth.inner_range();

    TruncationReport rep;
    for (long long c = -inner; c <= inner; ++c)
        rep.delta_big = std::max(rep.delta_big, std::fabs(w(c)));
    for (long long c = -truth.range(); c <= truth.range(); ++c) {
        bool near = false;
        for (int t = 0; t <= n && !near; ++t)
            if (std::llabs(c - spec.anchors[t]) <= 2 * spec.b) near = true;
        if (near) rep.delta_tilde = std::max(rep.delta_tilde, std::fabs(w(c)));
    }

    // Part (a): same weight W~ on both automata, gaps across all (t, c of F)
    // with |c| <= B (larger |c| is the reject state on the truncated side,
    // whose expectation is exactly 0 there).
    for (int t = 0; t <= n; ++t) {
        for (long long c = -inner; c <= inner; ++c) {
            double tv = v_truth[t][truth.state_of(c)];
            double uv = (c >= -spec.b && c <= spec.b)
                            ? v_trunc[t][trunc.state_of(c)]
                            : 0.0;
            rep.max_gap_a = std::max(rep.max_gap_a, std::fabs(tv - uv));
        }
    }
    rep.gap_b = std::fabs(v_trunc[0][trunc.start_state()] -
                          [&] {
                              // truthful expectation of the *undamped* W
                              WeightVector wu(truth.num_states());
                              for (int s = 0; s < truth.num_states(); ++s)
                                  wu[s] = w(truth.counter_of(s));
                              return exact_suffix_expectations(space, truth, wu)[0]
                                  [truth.start_state()];
                          }());

    // Coupling failure, measured per start (c, t): drive both automata with
    // the same samples and count runs whose damped final weights differ.
    // The DP gap from (c, t) is at most that probability times Delta, so the
    // maximum over starts stands in for the asymptotic Bernstein tail at
    // desk-scale spans.
    SplitMix64 rng(0xC0FFEEULL);
    double worst_p = 0.0;
    for (int t0 = 0; t0 < n; ++t0) {
        for (long long c0 = -inner; c0 <= inner; ++c0) {
            int s0 = truth.state_of(c0);
            int fails = 0;
            int fails_b = 0;  // part (b) event: damped-truncated vs undamped
            bool at_start = t0 == 0 && c0 == 0;
            for (int it = 0; it < mc_samples; ++it) {
                int st_tu = s0;
                int st_tr = (c0 >= -spec.b && c0 <= spec.b) ? trunc.state_of(c0)
                                                            : trunc.bot_state();
                for (int t = t0; t < n; ++t) {
                    const StepDistribution& sd = space.step(t);
                    double u = rng.uniform(), acc = 0.0;
                    int pick = sd.support_size() - 1;
                    for (int i = 0; i < sd.support_size(); ++i) {
                        acc += sd.probs[i];
                        if (u < acc) { pick = i; break; }
                    }
                    Symbol sym = space.symbol(t, pick);
                    st_tr = trunc.next(st_tr, sym);
                    st_tu = truth.next(st_tu, sym);
                }
                if (std::fabs(wt_trunc[st_tr] - wt_truth[st_tu]) > 0.0) ++fails;
                if (at_start &&
                    std::fabs(wt_trunc[st_tr] - w(truth.counter_of(st_tu))) > 0.0)
                    ++fails_b;
            }
            worst_p = std::max(worst_p, static_cast<double>(fails) / mc_samples);
            if (at_start)
                worst_p = std::max(worst_p, static_cast<double>(fails_b) / mc_samples);
        }
    }
    double sigma = std::sqrt(std::max(worst_p, 1.0 / mc_samples) * (1.0 - worst_p) /
                             mc_samples);
    rep.delta_measured = worst_p + 3.0 * sigma + 3.0 / mc_samples;

    rep.part_a_ok = rep.max_gap_a <= rep.delta_measured * rep.delta_big + 1e-12;
    rep.part_b_ok = rep.gap_b <= rep.delta_measured * rep.delta_big + 1e-12;

    // Part (c): confusion of (F~, W~) against the Lipschitz value of (F, W)
    // plus 2*Delta*delta + 6*Delta~*M_t/B.
    rep.max_c_excess = -std::numeric_limits<double>::infinity();
    auto reach_t = counter_reach(spec);
    for (int t = 0; t < n; ++t) {
        const StepDistribution& sd = space.step(t);
        auto [lo, hi] = reach_t[t];
        for (long long c = std::max(lo, -spec.b); c <= std::min(hi, spec.b); ++c) {
            int s_tr = trunc.state_of(c);
            double cmin = 0.0, cmax = 0.0;
            bool first = true;
            for (int i = 0; i < sd.support_size(); ++i) {
                if (sd.probs[i] == 0.0) continue;
                double val = v_trunc[t + 1][trunc.next(s_tr, space.symbol(t, i))];
                if (first) { cmin = cmax = val; first = false; }
                cmin = std::min(cmin, val);
                cmax = std::max(cmax, val);
            }
            double conf = cmax - cmin;
            // Lipschitz value of W on the truthful automaton at (c, t):
            // spread of W over one-coordinate changes, maximized over
            // suffix sums (integer interval).
            long long suf_lo = 0, suf_hi = 0;
            {
                long long acc_lo = 0, acc_hi = 0;
                for (int k = t + 1; k < n; ++k) {
                    long long mn = spec.increment(k, 0), mx = mn;
                    for (std::size_t i = 1; i < spec.f[k].size(); ++i) {
                        long long vv = spec.increment(k, static_cast<int>(i));
                        mn = std::min(mn, vv);
                        mx = std::max(mx, vv);
                    }
                    acc_lo += mn;
                    acc_hi += mx;
                }
                suf_lo = acc_lo;
                suf_hi = acc_hi;
            }
            double lip = 0.0;
            for (long long z = suf_lo; z <= suf_hi; ++z)
                for (int i1 = 0; i1 < sd.support_size(); ++i1)
                    for (int i2 = i1 + 1; i2 < sd.support_size(); ++i2) {
                        if (sd.probs[i1] == 0.0 || sd.probs[i2] == 0.0) continue;
                        long long z1 = c + spec.increment(t, i1) + z;
                        long long z2 = c + spec.increment(t, i2) + z;
                        lip = std::max(lip, std::fabs(w(z1) - w(z2)));
                    }
            double bound = lip + 2.0 * rep.delta_big * rep.delta_measured +
                           6.0 * rep.delta_tilde * spec.m_t[t] /
                               static_cast<double>(spec.b);
            rep.max_c_excess = std::max(rep.max_c_excess, conf - bound);
        }
    }
    rep.part_c_ok = rep.max_c_excess <= 1e-9;
    return rep;
}

}  // namespace autfool
