#include "autfool/gale_berlekamp.hpp"

#include <cmath>

#include "autfool/parallel.hpp"

namespace autfool {

void GBInstance::validate() const {
    if (n < 1) throw ValidationError("GB instance needs n >= 1");
    if (static_cast<int>(a.size()) != n) throw ValidationError("GB matrix shape");
    for (const auto& row : a) {
        if (static_cast<int>(row.size()) != n) throw ValidationError("GB matrix shape");
        for (int v : row)
            if (v != 1 && v != -1) throw ValidationError("GB entries must be +/-1");
    }
}

long long imbalance(const GBInstance& inst, const std::vector<int>& x,
                    const std::vector<int>& y) {
    if (static_cast<int>(x.size()) != inst.n || static_cast<int>(y.size()) != inst.n)
        throw ValidationError("sign vector length mismatch");
    long long acc = 0;
    for (int i = 0; i < inst.n; ++i) {
        long long row = 0;
        for (int j = 0; j < inst.n; ++j) row += inst.a[i][j] * y[j];
        acc += x[i] * row;
    }
    return acc;
}

double gb_expected_weight_oracle(int n) {
    if (n < 1) throw ValidationError("oracle needs n >= 1");
    if (n <= 30) {
        // Exact binomial sum: S_n = 2k - n with probability C(n,k)/2^n.
        double e = 0.0;
        double pk = std::pow(0.5, n);  // C(n,0)/2^n
        for (int k = 0; k <= n; ++k) {
            e += pk * std::fabs(2.0 * k - n);
            pk = pk * static_cast<double>(n - k) / static_cast<double>(k + 1);
        }
        return e;
    }
    // Closed form E|S_n| = n * 2^{1-n} * C(n-1, floor((n-1)/2)), evaluated
    // through lgamma for stability.
    int half = (n - 1) / 2;
    double logc = std::lgamma(n) - std::lgamma(half + 1) - std::lgamma(n - half);
    return n * std::exp(logc + (1.0 - n) * std::log(2.0));
}

GBResult run_gb(const GBInstance& inst, const GBConfig& cfg) {
    inst.validate();
    const int n = inst.n;

    // Drivestream r_t = y_t uniform on {-1, +1}.
    std::vector<StepDistribution> steps(n);
    for (int t = 0; t < n; ++t) {
        steps[t].values = {-1, 1};
        steps[t].probs = {0.5, 0.5};
    }
    ProbabilitySpace space = ProbabilitySpace(std::move(steps)).padded_to_pow2();
    const int np = space.n();

    // All rows share the span: M = 1, kappa = n.
    double delta_tail = std::pow(static_cast<double>(n), -10.0);
    std::vector<std::vector<long long>> f0(np);
    for (int t = 0; t < np; ++t) {
        if (t < n) f0[t] = {-static_cast<long long>(inst.a[0][t]),
                            static_cast<long long>(inst.a[0][t])};
        else f0[t] = {0};
    }
    CounterSpec spec0 = CounterSpec::build(space, f0, delta_tail, cfg.b_scale);
    const long long b = spec0.b;
    if (b < np)
        throw ValidationError("GB span below n; raise --b-scale");

    // Suffix expectations are row-independent: the suffix sum of A_it * y_t
    // under uniform signs has the same law for every row. One DP over the
    // reachable window [-np, np] serves all rows.
    const long long dom = np + 1;
    const std::size_t width = static_cast<std::size_t>(2 * dom + 1);
    auto wtil = [&](long long c) {
        return potential(c, b) * std::fabs(static_cast<double>(c));
    };
    std::vector<std::vector<double>> vhat(np + 1, std::vector<double>(width, 0.0));
    for (long long c = -dom; c <= dom; ++c) vhat[np][c + dom] = wtil(c);
    for (int t = np - 1; t >= 0; --t) {
        for (long long c = -dom; c <= dom; ++c) {
            if (space.is_padding_step(t)) {
                vhat[t][c + dom] = vhat[t + 1][c + dom];
                continue;
            }
            double up = c + 1 <= dom ? vhat[t + 1][c + 1 + dom] : wtil(c + 1);
            double dn = c - 1 >= -dom ? vhat[t + 1][c - 1 + dom] : wtil(c - 1);
            vhat[t][c + dom] = 0.5 * (up + dn);
        }
    }

    // Variability of the start state: per-step confusion maxed over the
    // states reachable at that time (|c| <= t with matching parity).
    double variability = 0.0;
    for (int t = 0; t < np; ++t) {
        if (space.is_padding_step(t)) continue;
        double worst = 0.0;
        for (long long c = -std::min<long long>(t, dom - 1); c <= std::min<long long>(t, dom - 1); ++c) {
            if (((c ^ t) & 1) != 0) continue;
            worst = std::max(worst,
                             std::fabs(vhat[t + 1][c + 1 + dom] - vhat[t + 1][c - 1 + dom]));
        }
        variability += worst;
    }

    double expected = vhat[0][dom];  // E_Omega[W~] from c = 0
    double eps = cfg.epsilon_scale /
                 std::sqrt(static_cast<double>(n) * std::log(std::max(2.0, static_cast<double>(n))));
    double beta = vhat_float_beta(np, static_cast<int>(width), vhat[np]);

    FoolConfig fc;
    fc.epsilon = eps;
    fc.reduce_c = cfg.reduce_c;
    fc.reduce_size_cap = cfg.size_cap;

    MergeSourceFactory factory = [&](const DrivestreamDistribution& d1,
                                     const DrivestreamDistribution& d2, int,
                                     int t) -> std::unique_ptr<ReduceSource> {
        int end = t + 2 * d1.h();
        std::vector<MergeBlock<1>> blocks(n);
        // Tracked rows: counters reachable at time t (parity matched).
        std::vector<std::array<long long, 1>> rows;
        long long extent = std::min<long long>(t, dom);
        for (long long c = -extent; c <= extent; ++c)
            if (((c ^ t) & 1) == 0) rows.push_back({c});
        // Window-end weight box shared by every row automaton.
        LatticeBox<1> w_end;
        long long ext_end = std::min<long long>(end, dom);
        w_end.lo[0] = -ext_end;
        w_end.hi[0] = ext_end;
        w_end.alloc();
        for (long long c = -ext_end; c <= ext_end; ++c)
            w_end.v[c + ext_end] = vhat[end][c + dom];
        for (int i = 0; i < n; ++i) {
            MergeBlock<1>& blk = blocks[i];
            blk.rows = rows;
            blk.w_end = w_end;
            blk.inc[0].resize(np);
            for (int step = 0; step < np; ++step) {
                if (step < n)
                    blk.inc[0][step] = {-static_cast<long long>(inst.a[i][step]),
                                        static_cast<long long>(inst.a[i][step])};
                else
                    blk.inc[0][step] = {0};
            }
        }
        return std::make_unique<CounterMergeSource<1>>(
            space, d1, d2, std::move(blocks), n * static_cast<int>(2 * b + 2));
    };

    FoolResult fr = fool_core(space, np, eps, fc, factory);

    // Exhaustive search, first maximizer wins.
    GBResult out;
    out.epsilon = eps;
    out.beta = beta;
    out.span = b;
    out.distribution_size = fr.d.size();
    out.expected_row_weight = expected;
    out.max_row_variability = variability;
    out.realized_drift = fr.realized_drift;

    long long best = -1;
    std::vector<int> best_y;
    for (std::size_t idx = 0; idx < fr.d.size(); ++idx) {
        const Drivestream& r = fr.d.entry(idx);
        std::vector<int> y(n);
        for (int t = 0; t < n; ++t)
            y[t] = static_cast<int>(space.step(t).values[r.sym_indices[t]]);
        long long total = 0;
        for (int i = 0; i < n; ++i) {
            long long row = 0;
            for (int j = 0; j < n; ++j) row += inst.a[i][j] * y[j];
            total += std::llabs(row);
        }
        if (total > best) {
            best = total;
            best_y = std::move(y);
        }
    }
    out.y = best_y;
    out.x.resize(n);
    for (int i = 0; i < n; ++i) {
        long long row = 0;
        for (int j = 0; j < n; ++j) row += inst.a[i][j] * best_y[j];
        out.x[i] = row > 0 ? 1 : -1;
    }
    out.imbalance = imbalance(inst, out.x, out.y);
    out.certified_bound =
        n * (expected - eps * variability - 3.0 * beta * np);
    out.ratio_to_n32 = static_cast<double>(out.imbalance) /
                       std::pow(static_cast<double>(n), 1.5);
    return out;
}

}  // namespace autfool
