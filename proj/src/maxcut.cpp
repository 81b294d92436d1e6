#include "autfool/maxcut.hpp"

#include <algorithm>
#include <cmath>

#include "autfool/parallel.hpp"

namespace autfool {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

constexpr double kPi = 3.14159265358979323846;

// Nonzero cells of a grid, for sparse correlation.
struct SparseCell {
    long long di, dj;
    double v;
};
std::vector<SparseCell> nonzeros(const Grid2D& g) {
    std::vector<SparseCell> out;
    for (int i = 0; i < g.ni; ++i)
        for (int j = 0; j < g.nj; ++j) {
            double v = g.v[static_cast<std::size_t>(i) * g.nj + j];
            if (v != 0.0) out.push_back({g.lo_i + i, g.lo_j + j, v});
        }
    return out;
}

Grid2D correlate_sparse(const Grid2D& kernel, const Grid2D& f, long long lo_i,
                        long long lo_j, int ni, int nj) {
    std::vector<SparseCell> cells = nonzeros(kernel);
    Grid2D out;
    out.lo_i = lo_i;
    out.lo_j = lo_j;
    out.ni = ni;
    out.nj = nj;
    out.v.assign(static_cast<std::size_t>(ni) * nj, 0.0);
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j) {
            double acc = 0.0;
            for (const auto& c : cells)
                acc += c.v * f.at(lo_i + i + c.di, lo_j + j + c.dj);
            out.v[static_cast<std::size_t>(i) * nj + j] = acc;
        }
    return out;
}

}  // namespace

QuantizationParams QuantizationParams::make(double epsilon, double c, int n) {
    if (!(epsilon > 0.0) || !(c > 0.0) || n < 1)
        throw ValidationError("bad quantization parameters");
    QuantizationParams qp;
    qp.epsilon = epsilon;
    qp.c = c;
    double logterm = std::log(static_cast<double>(n) / epsilon);
    if (logterm < 1.0) logterm = 1.0;
    qp.gamma = epsilon / (c * std::sqrt(static_cast<double>(n) * logterm));
    qp.r = c * logterm;
    if (qp.r < 1.0) qp.r = 1.0;
    return qp;
}

StepDistribution gaussian_alphabet(const QuantizationParams& qp) {
    long long k_max = static_cast<long long>(std::floor(qp.r / qp.gamma));
    StepDistribution st;
    auto cell_mass = [&](long long k) {
        double lo = std::max(-qp.r, (static_cast<double>(k) - 0.5) * qp.gamma);
        double hi = std::min(qp.r, (static_cast<double>(k) + 0.5) * qp.gamma);
        if (hi <= lo) return 0.0;
        return normal_cdf(hi) - normal_cdf(lo);
    };
    double tail = 2.0 * normal_cdf(-qp.r);
    double total = 0.0;
    for (long long k = -k_max; k <= k_max; ++k) {
        double p = k > 0 ? cell_mass(k) : (k < 0 ? cell_mass(-k) : cell_mass(0) + tail);
        st.values.push_back(k);
        st.probs.push_back(p);
        total += p;
    }
    for (double& p : st.probs) p /= total;
    return st;
}

void Graph::validate() const {
    if (n < 1) throw ValidationError("graph needs n >= 1");
    for (const auto& e : edges) {
        if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n || e.i == e.j)
            throw ValidationError("bad edge endpoints");
        if (!(e.w > 0.0)) throw ValidationError("edge weights must be positive");
    }
}

void SdpSolution::validate() const {
    if (static_cast<int>(vectors.size()) != n)
        throw ValidationError("SDP solution vector count mismatch");
    for (const auto& v : vectors) {
        if (static_cast<int>(v.size()) != dim)
            throw ValidationError("SDP vector dimension mismatch");
        double norm = 0.0;
        for (double x : v) norm += x * x;
        if (std::fabs(std::sqrt(norm) - 1.0) > tol().sdp_unit_norm)
            throw ValidationError("SDP vector is not unit norm");
    }
}

double star_product(const std::vector<double>& v, const std::vector<double>& r,
                    double gamma) {
    if (v.size() != r.size()) throw ValidationError("star product length mismatch");
    long long acc = 0;
    for (std::size_t k = 0; k < v.size(); ++k)
        acc += round_half_even(v[k] * r[k] / gamma);
    return gamma * static_cast<double>(acc);
}

double edge_weight(bool bot_i, bool bot_j, long long ci, long long cj, double eps,
                   double gamma, long long bi, long long bj) {
    if (bot_i || bot_j) return 0.0;
    bool si = ci >= 0, sj = cj >= 0;
    if (si == sj) return 0.0;
    double raw = gamma * std::fabs(static_cast<double>(ci - cj)) / eps;
    if (raw > 1.0) raw = 1.0;
    return raw * potential(ci, bi) * potential(cj, bj);
}

EdgeAutomaton::EdgeAutomaton(CounterSpec spec_i, CounterSpec spec_j)
    : Automaton(0, 0), si_(std::move(spec_i)), sj_(std::move(spec_j)) {
    wi_ = static_cast<int>(2 * si_.b + 2);
    wj_ = static_cast<int>(2 * sj_.b + 2);
    num_states_ = wi_ * wj_;
    start_state_ = encode(0, 0, false, false);
}

int EdgeAutomaton::encode(long long ci, long long cj, bool bot_i, bool bot_j) const {
    int ii = bot_i ? wi_ - 1 : static_cast<int>(ci + si_.b);
    int jj = bot_j ? wj_ - 1 : static_cast<int>(cj + sj_.b);
    return ii * wj_ + jj;
}

void EdgeAutomaton::decode(int state, long long& ci, long long& cj, bool& bot_i,
                           bool& bot_j) const {
    int ii = state / wj_, jj = state % wj_;
    bot_i = ii == wi_ - 1;
    bot_j = jj == wj_ - 1;
    ci = bot_i ? 0 : ii - si_.b;
    cj = bot_j ? 0 : jj - sj_.b;
}

int EdgeAutomaton::next(int state, const Symbol& sym) const {
    long long ci, cj;
    bool bot_i, bot_j;
    decode(state, ci, cj, bot_i, bot_j);
    if (!bot_i) {
        if (sym.step < static_cast<int>(si_.f.size()))
            ci += si_.increment(sym.step, sym.index);
        if (ci > si_.b || ci < -si_.b) bot_i = true;
    }
    if (!bot_j) {
        if (sym.step < static_cast<int>(sj_.f.size()))
            cj += sj_.increment(sym.step, sym.index);
        if (cj > sj_.b || cj < -sj_.b) bot_j = true;
    }
    return encode(bot_i ? 0 : ci, bot_j ? 0 : cj, bot_i, bot_j);
}

std::vector<EdgeContext> build_edge_contexts(const Graph& g, const SdpSolution& sdp,
                                             const MaxcutConfig& cfg,
                                             const ProbabilitySpace& space,
                                             const QuantizationParams& qp) {
    const int np = space.n();
    double delta_tail = std::pow(qp.epsilon / g.n, 10.0);

    // Per-vertex increment tables and spans.
    std::vector<std::vector<std::vector<long long>>> inc(g.n);
    std::vector<std::vector<long long>> reach(g.n);
    std::vector<long long> span(g.n);
    for (int v = 0; v < g.n; ++v) {
        inc[v].resize(np);
        reach[v].assign(np + 1, 0);
        for (int t = 0; t < np; ++t) {
            const StepDistribution& st = space.step(t);
            inc[v][t].resize(st.support_size());
            long long worst = 0;
            for (int s = 0; s < st.support_size(); ++s) {
                long long q = t < sdp.dim
                                  ? round_half_even(sdp.vectors[v][t] *
                                                    static_cast<double>(st.values[s]))
                                  : 0;
                inc[v][t][s] = q;
                worst = std::max(worst, std::llabs(q));
            }
            reach[v][t + 1] = reach[v][t] + worst;
        }
        CounterSpec cs = CounterSpec::build(space, inc[v], delta_tail, cfg.b_scale,
                                            reach[v][np] + 1);
        span[v] = cs.b;
    }

    std::vector<EdgeContext> out;
    out.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        EdgeContext ctx;
        ctx.i = e.i;
        ctx.j = e.j;
        ctx.w = e.w;
        ctx.inc[0] = inc[e.i];
        ctx.inc[1] = inc[e.j];
        ctx.reach_i = reach[e.i];
        ctx.reach_j = reach[e.j];
        ctx.bi = span[e.i];
        ctx.bj = span[e.j];
        double dot = 0.0;
        for (int k = 0; k < sdp.dim; ++k)
            dot += sdp.vectors[e.i][k] * sdp.vectors[e.j][k];
        ctx.dot = std::clamp(dot, -1.0, 1.0);
        out.push_back(std::move(ctx));
    }
    return out;
}

namespace {

Grid2D final_weight_grid(const EdgeContext& e, int np, double eps, double gamma) {
    Grid2D w;
    long long ri = e.reach_i[np], rj = e.reach_j[np];
    w.lo_i = -ri;
    w.lo_j = -rj;
    w.ni = static_cast<int>(2 * ri + 1);
    w.nj = static_cast<int>(2 * rj + 1);
    w.v.assign(static_cast<std::size_t>(w.ni) * w.nj, 0.0);
    for (long long ci = -ri; ci <= ri; ++ci)
        for (long long cj = -rj; cj <= rj; ++cj)
            w.cell(ci, cj) =
                edge_weight(false, false, ci, cj, eps, gamma, e.bi, e.bj);
    return w;
}

Grid2D base_step_grid(const EdgeContext& e, const ProbabilitySpace& space, int t) {
    const StepDistribution& st = space.step(t);
    long long lo_i = 0, hi_i = 0, lo_j = 0, hi_j = 0;
    for (int s = 0; s < st.support_size(); ++s) {
        lo_i = std::min(lo_i, e.inc[0][t][s]);
        hi_i = std::max(hi_i, e.inc[0][t][s]);
        lo_j = std::min(lo_j, e.inc[1][t][s]);
        hi_j = std::max(hi_j, e.inc[1][t][s]);
    }
    Grid2D g;
    g.lo_i = lo_i;
    g.lo_j = lo_j;
    g.ni = static_cast<int>(hi_i - lo_i + 1);
    g.nj = static_cast<int>(hi_j - lo_j + 1);
    g.v.assign(static_cast<std::size_t>(g.ni) * g.nj, 0.0);
    for (int s = 0; s < st.support_size(); ++s)
        g.cell(e.inc[0][t][s], e.inc[1][t][s]) += st.probs[s];
    return g;
}

}  // namespace

EdgeVhat compute_vhat_fft(const EdgeContext& e, const ProbabilitySpace& space,
                          double eps, double gamma, std::size_t fft_threshold) {
    const int np = space.n();
    int lgn = lg2_exact(static_cast<std::uint64_t>(np));
    EdgeVhat out;
    ConvStats stats;

    // Increment-pair distributions for every dyadic window.
    std::vector<std::vector<Grid2D>> pyr(lgn + 1);
    pyr[0].resize(np);
    for (int t = 0; t < np; ++t) pyr[0][t] = base_step_grid(e, space, t);
    for (int lev = 1; lev <= lgn; ++lev) {
        int count = np >> lev;
        pyr[lev].resize(count);
        for (int k = 0; k < count; ++k)
            pyr[lev][k] =
                conv2d(pyr[lev - 1][2 * k], pyr[lev - 1][2 * k + 1], fft_threshold,
                       &stats);
    }

    out.v.resize(np + 1);
    out.v[np] = final_weight_grid(e, np, eps, gamma);
    // Top-down: level h fills every odd multiple of h.
    for (int lev = lgn - 1; lev >= 0; --lev) {
        int h = 1 << lev;
        for (int t = h; t < np; t += 2 * h) {
            long long ri = e.reach_i[t], rj = e.reach_j[t];
            out.v[t] = correlate2d(pyr[lev][t / h], out.v[t + h], -ri, -rj,
                                   static_cast<int>(2 * ri + 1),
                                   static_cast<int>(2 * rj + 1), fft_threshold);
        }
    }
    {
        long long ri = e.reach_i[0], rj = e.reach_j[0];
        out.v[0] = correlate2d(pyr[lgn][0], out.v[np], -ri, -rj,
                               static_cast<int>(2 * ri + 1),
                               static_cast<int>(2 * rj + 1), fft_threshold);
    }
    out.fft_mass = stats.clamped_mass;
    return out;
}

EdgeVhat compute_vhat_direct(const EdgeContext& e, const ProbabilitySpace& space,
                             double eps, double gamma) {
    const int np = space.n();
    EdgeVhat out;
    out.v.resize(np + 1);
    out.v[np] = final_weight_grid(e, np, eps, gamma);
    for (int t = np - 1; t >= 0; --t) {
        Grid2D base = base_step_grid(e, space, t);
        long long ri = e.reach_i[t], rj = e.reach_j[t];
        out.v[t] = correlate_sparse(base, out.v[t + 1], -ri, -rj,
                                    static_cast<int>(2 * ri + 1),
                                    static_cast<int>(2 * rj + 1));
    }
    return out;
}

double cut_weight_of(const Graph& g, const std::vector<int>& side) {
    if (static_cast<int>(side.size()) != g.n)
        throw ValidationError("cut side vector length mismatch");
    double acc = 0.0;
    for (const auto& e : g.edges)
        if (side[e.i] != side[e.j]) acc += e.w;
    return acc;
}

std::pair<std::vector<int>, double> brute_force_maxcut(const Graph& g) {
    if (g.n > 22) throw GuardError("brute force limited to n <= 22");
    std::uint64_t best_mask = 0;
    double best = -1.0;
    for (std::uint64_t mask = 0; mask < (1ull << g.n); ++mask) {
        double acc = 0.0;
        for (const auto& e : g.edges)
            if (((mask >> e.i) ^ (mask >> e.j)) & 1) acc += e.w;
        if (acc > best) {
            best = acc;
            best_mask = mask;
        }
    }
    std::vector<int> side(g.n);
    for (int v = 0; v < g.n; ++v) side[v] = (best_mask >> v) & 1;
    return {side, best};
}

CouplingCheck coupling_check(const std::vector<double>& u, double eps,
                             const QuantizationParams& qp, int samples,
                             std::uint64_t seed) {
    SplitMix64 rng(seed);
    int exceed = 0;
    const int n = static_cast<int>(u.size());
    for (int it = 0; it < samples; ++it) {
        double dot = 0.0;
        long long star = 0;
        for (int k = 0; k < n; ++k) {
            double x = rng.normal();
            dot += u[k] * x;
            double r = std::fabs(x) <= qp.r
                           ? qp.gamma * static_cast<double>(round_half_even(x / qp.gamma))
                           : 0.0;
            star += round_half_even(u[k] * r / qp.gamma);
        }
        double starval = qp.gamma * static_cast<double>(star);
        if (std::fabs(dot - starval) > eps) ++exceed;
    }
    CouplingCheck out;
    out.samples = samples;
    out.exceed_rate = static_cast<double>(exceed) / samples;
    // Wilson upper bound at z = 3.
    double z = 3.0, p = out.exceed_rate, nn = samples;
    out.wilson_upper =
        (p + z * z / (2 * nn) + z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn))) /
        (1 + z * z / nn);
    return out;
}

MaxcutResult round_maxcut(const Graph& g, const SdpSolution& sdp,
                          const MaxcutConfig& cfg) {
    g.validate();
    sdp.validate();
    if (sdp.n != g.n) throw ValidationError("graph/SDP vertex count mismatch");

    QuantizationParams qp = QuantizationParams::make(cfg.epsilon, cfg.quant_c, g.n);
    StepDistribution alpha = gaussian_alphabet(qp);
    std::vector<StepDistribution> steps(sdp.dim, alpha);
    ProbabilitySpace space = ProbabilitySpace(std::move(steps)).padded_to_pow2();
    const int np = space.n();

    std::vector<EdgeContext> ctx = build_edge_contexts(g, sdp, cfg, space, qp);

    MaxcutResult res;
    res.gamma = qp.gamma;
    res.r_cut = qp.r;
    res.epsilon_prime = cfg.eps_prime_override > 0.0
                            ? cfg.eps_prime_override
                            : cfg.epsilon / std::sqrt(static_cast<double>(g.n));

    // Suffix expectations per edge (FFT path).
    std::vector<EdgeVhat> vhat(ctx.size());
    parallel_for(static_cast<std::int64_t>(ctx.size()),
                 [&](int, std::int64_t lo, std::int64_t hi) {
                     for (std::int64_t k = lo; k < hi; ++k)
                         vhat[k] = compute_vhat_fft(ctx[k], space, cfg.epsilon,
                                                    qp.gamma, cfg.fft_threshold);
                 });
    double fft_mass = 0.0;
    long long max_states = 0;
    for (std::size_t k = 0; k < ctx.size(); ++k) {
        fft_mass = std::max(fft_mass, vhat[k].fft_mass);
        long long st = (2 * ctx[k].bi + 2) * (2 * ctx[k].bj + 2);
        max_states = std::max(max_states, st);
    }
    res.max_states_per_edge = max_states;
    res.fft_mass = fft_mass;
    double beta = fft_mass + 1e-12;
    res.beta = beta;

    long long eta_total = 0;
    for (const auto& c : ctx) eta_total += (2 * c.bi + 2) * (2 * c.bj + 2);
    int eta = static_cast<int>(std::min<long long>(eta_total, 1ll << 30));

    FoolConfig fc;
    fc.epsilon = res.epsilon_prime;
    fc.reduce_c = cfg.reduce_c;
    fc.reduce_size_cap = cfg.size_cap;

    MergeSourceFactory factory = [&](const DrivestreamDistribution& d1,
                                     const DrivestreamDistribution& d2, int,
                                     int t) -> std::unique_ptr<ReduceSource> {
        int end = t + 2 * d1.h();
        std::vector<MergeBlock<2>> blocks(ctx.size());
        for (std::size_t k = 0; k < ctx.size(); ++k) {
            const EdgeContext& e = ctx[k];
            MergeBlock<2>& blk = blocks[k];
            blk.inc[0] = e.inc[0];
            blk.inc[1] = e.inc[1];
            const Grid2D& wg = vhat[k].v[end];
            blk.w_end.lo = {wg.lo_i, wg.lo_j};
            blk.w_end.hi = {wg.lo_i + wg.ni - 1, wg.lo_j + wg.nj - 1};
            blk.w_end.v = wg.v;
            long long ri = e.reach_i[t], rj = e.reach_j[t];
            long long si = std::max<long long>(1, (ri + cfg.rows_per_axis / 2) /
                                                      (cfg.rows_per_axis / 2));
            long long sj = std::max<long long>(1, (rj + cfg.rows_per_axis / 2) /
                                                      (cfg.rows_per_axis / 2));
            for (long long a = -(ri / si) * si; a <= ri; a += si)
                for (long long b = -(rj / sj) * sj; b <= rj; b += sj)
                    blk.rows.push_back({a, b});
        }
        return std::make_unique<CounterMergeSource<2>>(space, d1, d2,
                                                       std::move(blocks), eta);
    };

    FoolResult fr = fool_core(space, np, res.epsilon_prime, fc, factory);
    res.distribution_size = fr.d.size();
    res.realized_drift = fr.realized_drift;

    // Exhaustive search over the distribution: realized cut weight decides.
    std::vector<std::vector<long long>> vertex_inc(g.n);
    for (int v = 0; v < g.n; ++v) vertex_inc[v].assign(fr.d.size(), 0);
    {
        // Per-vertex quantized sums for every entry.
        std::vector<std::vector<std::vector<long long>>> inc(g.n);
        for (int v = 0; v < g.n; ++v) {
            inc[v].resize(np);
            for (int t = 0; t < np; ++t) {
                const StepDistribution& st = space.step(t);
                inc[v][t].resize(st.support_size());
                for (int s = 0; s < st.support_size(); ++s)
                    inc[v][t][s] = t < sdp.dim
                                       ? round_half_even(
                                             sdp.vectors[v][t] *
                                             static_cast<double>(st.values[s]))
                                       : 0;
            }
        }
        for (std::size_t idx = 0; idx < fr.d.size(); ++idx) {
            const Drivestream& r = fr.d.entry(idx);
            for (int v = 0; v < g.n; ++v) {
                long long acc = 0;
                for (int t = 0; t < np; ++t) acc += inc[v][t][r.sym_indices[t]];
                vertex_inc[v][idx] = acc;
            }
        }
    }
    double best = -1.0;
    std::size_t best_idx = 0;
    for (std::size_t idx = 0; idx < fr.d.size(); ++idx) {
        double acc = 0.0;
        for (const auto& e : g.edges) {
            bool si = vertex_inc[e.i][idx] >= 0, sj = vertex_inc[e.j][idx] >= 0;
            if (si != sj) acc += e.w;
        }
        if (acc > best) {
            best = acc;
            best_idx = idx;
        }
    }
    res.cut_weight = best;
    res.side.resize(g.n);
    res.cut_bitmask = 0;
    for (int v = 0; v < g.n; ++v) {
        res.side[v] = vertex_inc[v][best_idx] >= 0 ? 1 : 0;
        if (v < 64 && res.side[v]) res.cut_bitmask |= (1ull << v);
    }

    // Reports.
    res.sdp_value = 0.0;
    res.sum_model = 0.0;
    double certified = 0.0;
    for (std::size_t k = 0; k < ctx.size(); ++k) {
        const EdgeContext& e = ctx[k];
        EdgeReport er;
        er.i = e.i;
        er.j = e.j;
        er.w = e.w;
        er.dot = e.dot;
        er.model_cut_prob = std::acos(e.dot) / kPi;
        er.expected_weight = vhat[k].v[0].at(0, 0);
        double mean_d = 0.0;
        for (std::size_t idx = 0; idx < fr.d.size(); ++idx) {
            mean_d += fr.d.prob(idx) *
                      edge_weight(false, false, vertex_inc[e.i][idx],
                                  vertex_inc[e.j][idx], cfg.epsilon, qp.gamma, e.bi,
                                  e.bj);
        }
        er.mean_weight_d = mean_d;
        if (cfg.with_variability) {
            double var = 0.0;
            for (int t = 0; t < np; ++t) {
                const StepDistribution& st = space.step(t);
                const Grid2D& nxt = vhat[k].v[t + 1];
                long long ri = e.reach_i[t], rj = e.reach_j[t];
                double worst = 0.0;
                for (long long ci = -ri; ci <= ri; ++ci)
                    for (long long cj = -rj; cj <= rj; ++cj) {
                        double mn = 0.0, mx = 0.0;
                        bool first = true;
                        for (int s = 0; s < st.support_size(); ++s) {
                            if (st.probs[s] == 0.0) continue;
                            double val = nxt.at(ci + e.inc[0][t][s],
                                                cj + e.inc[1][t][s]);
                            if (first) { mn = mx = val; first = false; }
                            mn = std::min(mn, val);
                            mx = std::max(mx, val);
                        }
                        worst = std::max(worst, mx - mn);
                    }
                var += worst;
            }
            er.variability = var;
        }
        res.sdp_value += e.w * 0.5 * (1.0 - e.dot);
        res.sum_model += e.w * er.model_cut_prob;
        certified += e.w * (er.expected_weight - res.epsilon_prime * er.variability -
                            3.0 * beta * np);
        res.edges.push_back(er);
    }
    res.certified_cut_bound = certified;
    res.ratio_cut_over_sdp = res.sdp_value > 0 ? res.cut_weight / res.sdp_value : 0.0;
    return res;
}

}  // namespace autfool
