#include "autfool/fool.hpp"

#include <cmath>

namespace autfool {

double FoolConfig::delta(int n) const {
    double lgn = n > 1 ? std::log2(static_cast<double>(n)) : 0.0;
    return epsilon / (20.0 * (1.0 + lgn));
}

double vhat_float_beta(int n, int eta, const WeightVector& w) {
    double wmax = 0.0;
    for (double x : w) wmax = std::max(wmax, std::fabs(x));
    return static_cast<double>(n) * static_cast<double>(eta) *
           std::numeric_limits<double>::epsilon() * wmax;
}

VhatProvider compute_vhat_exact_dp(const ProbabilitySpace& space, const Automaton& f,
                                   const WeightVector& w) {
    VhatProvider out;
    out.v = exact_suffix_expectations(space, f, w);
    out.beta = vhat_float_beta(space.n(), f.num_states(), w);
    out.mode = VhatMode::ExactDp;
    return out;
}

VhatProvider compute_vhat_generic(const ProbabilitySpace& space, const Automaton& f,
                                  const WeightVector& w) {
    const int n = space.n();
    const int eta = f.num_states();
    if (!is_pow2(static_cast<std::uint64_t>(n)))
        throw ValidationError("compute_vhat_generic requires n to be a power of two");

    // Phase 1: transition matrices for every dyadic window, bottom up.
    // mats[i] holds T_{t, t+h} for h = 2^i at t = j*h.
    std::vector<std::vector<std::vector<double>>> mats;
    {
        std::vector<std::vector<double>> base;
        for (int t = 0; t < n; ++t) {
            std::vector<double> m(static_cast<std::size_t>(eta) * eta, 0.0);
            const StepDistribution& st = space.step(t);
            for (int s = 0; s < eta; ++s)
                for (int i = 0; i < st.support_size(); ++i)
                    m[static_cast<std::size_t>(s) * eta + f.next(s, space.symbol(t, i))] +=
                        st.probs[i];
            base.push_back(std::move(m));
        }
        mats.push_back(std::move(base));
    }
    int lgn = lg2_exact(static_cast<std::uint64_t>(n));
    for (int i = 1; i <= lgn; ++i) {
        std::vector<std::vector<double>> level;
        int count = n >> i;
        for (int j = 0; j < count; ++j) {
            const auto& a = mats[i - 1][2 * j];
            const auto& b = mats[i - 1][2 * j + 1];
            std::vector<double> m(static_cast<std::size_t>(eta) * eta, 0.0);
            for (int r = 0; r < eta; ++r)
                for (int k = 0; k < eta; ++k) {
                    double av = a[static_cast<std::size_t>(r) * eta + k];
                    if (av == 0.0) continue;
                    for (int c = 0; c < eta; ++c)
                        m[static_cast<std::size_t>(r) * eta + c] +=
                            av * b[static_cast<std::size_t>(k) * eta + c];
                }
            level.push_back(std::move(m));
        }
        mats.push_back(std::move(level));
    }

    // Phase 2: top-down suffix vectors at progressively finer times.
    VhatProvider out;
    out.v.assign(n + 1, WeightVector());
    out.v[n] = w;
    for (int i = lgn - 1; i >= 0; --i) {
        int h = 1 << i;
        for (int t = h; t < n; t += h) {
            if (!out.v[t].empty()) continue;
            const auto& m = mats[i][t / h];
            const WeightVector& nx = out.v[t + h];
            WeightVector v(eta, 0.0);
            for (int s = 0; s < eta; ++s) {
                double acc = 0.0;
                for (int c = 0; c < eta; ++c)
                    acc += m[static_cast<std::size_t>(s) * eta + c] * nx[c];
                v[s] = acc;
            }
            out.v[t] = std::move(v);
        }
    }
    {
        const auto& m = mats[lgn][0];
        WeightVector v(eta, 0.0);
        for (int s = 0; s < eta; ++s) {
            double acc = 0.0;
            for (int c = 0; c < eta; ++c)
                acc += m[static_cast<std::size_t>(s) * eta + c] * w[c];
            v[s] = acc;
        }
        out.v[0] = std::move(v);
    }
    out.beta = vhat_float_beta(n, eta, w);
    out.mode = VhatMode::MatrixProduct;
    return out;
}

FoolResult fool_core(const ProbabilitySpace& space, int n, double epsilon,
                     const FoolConfig& cfg, const MergeSourceFactory& factory) {
    if (!is_pow2(static_cast<std::uint64_t>(n)))
        throw ValidationError("fool requires n to be a power of two");
    double delta = cfg.delta(n);

    std::vector<DrivestreamDistribution> cur;
    for (int t = 0; t < n; ++t) cur.push_back(DrivestreamDistribution::from_step(space, t));

    FoolResult res;
    res.delta = delta;
    res.level_sizes.push_back(cur[0].size());

    ReduceConfig rcfg;
    rcfg.epsilon = delta;
    rcfg.c = cfg.reduce_c;
    rcfg.size_cap = cfg.reduce_size_cap;

    int lgn = lg2_exact(static_cast<std::uint64_t>(n));
    for (int i = 0; i < lgn; ++i) {
        int h = 1 << i;
        std::vector<DrivestreamDistribution> nxt;
        for (int t = 0; t + 2 * h <= n; t += 2 * h) {
            std::unique_ptr<ReduceSource> src =
                factory(cur[t / h], cur[t / h + 1], i, t);
            ReduceDiagnostics diag;
            nxt.push_back(reduce(*src, rcfg, &diag));
            res.capped = res.capped || diag.capped;
            double worst = 0.0;
            for (double d : diag.row_drift) worst = std::max(worst, d);
            res.merge_drift.push_back(worst);
            res.realized_drift += worst;
        }
        cur = std::move(nxt);
        res.level_sizes.push_back(cur[0].size());
    }
    res.d = std::move(cur[0]);
    return res;
}

FoolResult fool(const ProbabilitySpace& space, const Automaton& f,
                const WeightVector& w, const FoolConfig& cfg,
                const VhatProvider* vhat) {
    ProbabilitySpace padded = space.padded_to_pow2();
    const int n = padded.n();
    const int eta = f.num_states();
    if (static_cast<int>(w.size()) != eta)
        throw ValidationError("weight vector size mismatch");

    VhatProvider local;
    if (vhat == nullptr) {
        if (cfg.vhat_mode == VhatMode::ApplicationSupplied)
            throw ValidationError("application-supplied vhat mode needs a provider");
        local = cfg.vhat_mode == VhatMode::MatrixProduct
                    ? compute_vhat_generic(padded, f, w)
                    : compute_vhat_exact_dp(padded, f, w);
        vhat = &local;
    }
    if (static_cast<int>(vhat->v.size()) != n + 1)
        throw ValidationError("vhat provider has inconsistent dimensions");
    for (const auto& vec : vhat->v)
        if (static_cast<int>(vec.size()) != eta)
            throw ValidationError("vhat provider has inconsistent dimensions");
    for (int s = 0; s < eta; ++s)
        if (vhat->v[n][s] != w[s])
            throw ValidationError("vhat provider must end exactly at W");

    std::vector<std::vector<int>> reach;
    if (cfg.rows_from_start_reachability) {
        std::vector<int> starts;
        if (auto* prod = dynamic_cast<const ProductAutomaton*>(&f)) {
            for (int b = 0; b < prod->num_blocks(); ++b)
                starts.push_back(prod->block_start_state(b));
        } else {
            starts.push_back(f.start_state());
        }
        reach = reachable_states(padded, f, starts);
    }

    MergeSourceFactory factory = [&](const DrivestreamDistribution& d1,
                                     const DrivestreamDistribution& d2, int, int t)
        -> std::unique_ptr<ReduceSource> {
        const WeightVector& w_end = vhat->v[t + 2 * d1.h()];
        std::shared_ptr<const PredictionStructure> q =
            build_product(d1, d2, f, padded, w_end);
        std::vector<int> rows;
        if (cfg.rows_from_start_reachability) rows = reach[t];
        return std::make_unique<PredictionReduceSource>(std::move(q), eta,
                                                        std::move(rows));
    };

    FoolResult res = fool_core(padded, n, cfg.epsilon, cfg, factory);
    res.beta = vhat->beta;
    return res;
}

FoolVerifyReport verify_fooling(const DrivestreamDistribution& d,
                                const ProbabilitySpace& space, const Automaton& f,
                                const WeightVector& w, double epsilon, double beta,
                                const std::vector<double>* variability,
                                const std::vector<int>* states) {
    std::vector<double> var;
    if (variability == nullptr) {
        AnalysisMetrics m = analysis_metrics(space, f, w, 0, /*with_lipschitz=*/false);
        var = std::move(m.variability);
        variability = &var;
    }
    std::vector<WeightVector> v = exact_suffix_expectations(space, f, w);

    std::vector<int> all;
    if (states == nullptr) {
        for (int s = 0; s < f.num_states(); ++s) all.push_back(s);
        states = &all;
    }

    FoolVerifyReport rep;
    rep.ok = true;
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (int s : *states) {
        double td = expectation_over(d, f, space, s, w);
        double err = std::fabs(td - v[0][s]);
        double bound = epsilon * (*variability)[s] + 3.0 * beta * space.n();
        FoolVerifyRow row{s, err, bound, bound - err};
        rep.min_slack = std::min(rep.min_slack, row.slack);
        if (row.slack < 0) rep.ok = false;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace autfool
