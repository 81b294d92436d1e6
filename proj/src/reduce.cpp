#include "autfool/reduce.hpp"

#include <cmath>
#include <unordered_map>

#include "autfool/parallel.hpp"

namespace autfool {

void ReduceConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 0.5))
        throw ValidationError("reduce epsilon must lie in (0, 1/2]");
    if (!(c > 0.0)) throw ValidationError("reduce constant C must be positive");
}

PredictionReduceSource::PredictionReduceSource(
    std::shared_ptr<const PredictionStructure> q, int eta, std::vector<int> rows)
    : q_(std::move(q)), eta_(eta), rows_(std::move(rows)) {
    if (rows_.empty())
        for (int s = 0; s < eta_; ++s) rows_.push_back(s);
}

void PredictionReduceSource::fill_columns(const std::vector<std::uint64_t>& prefixes,
                                          int level, double* slab, double* u_out) {
    const std::size_t rows = rows_.size();
    parallel_for(static_cast<std::int64_t>(prefixes.size()),
                 [&](int, std::int64_t lo, std::int64_t hi) {
                     for (std::int64_t c = lo; c < hi; ++c) {
                         std::uint64_t b0 = prefixes[c] << 1, b1 = b0 | 1;
                         double* a = slab + static_cast<std::size_t>(c) * rows;
                         for (std::size_t r = 0; r < rows; ++r)
                             a[r] = q_->query_expect(b1, level + 1, rows_[r]) -
                                    q_->query_expect(b0, level + 1, rows_[r]);
                         double pb = q_->query_prob(prefixes[c], level);
                         u_out[c] = pb == 0.0
                                        ? 0.0
                                        : q_->query_prob(b1, level + 1) / pb;
                     }
                 });
}

std::uint64_t PredictionReduceSource::first_real_index() const {
    for (std::uint64_t i = 0; i < (1ull << q_->depth()); ++i)
        if (q_->query_prob(i, q_->depth()) > 0.0) return i;
    throw ValidationError("distribution has no positive-probability entry");
}

std::size_t reduce_output_size(double epsilon, int levels, int eta,
                               std::size_t tracked_rows, double& c_in_out) {
    if (levels == 0) return 1;
    double log_eta = std::log(static_cast<double>(eta < 2 ? 2 : eta));
    double l = static_cast<double>(levels);
    // Worst-case per-level drift of the split estimator at R tracked rows:
    // sup over mu_pos + mu_neg <= m of sqrt(3 mu_pos L) + sqrt(3 mu_neg L)
    // equals sqrt(6 m L), plus the 4L additive term.
    double big_l = std::log(4.0 * 2.0 * static_cast<double>(tracked_rows < 1 ? 1 : tracked_rows));
    for (;;) {
        double m = std::ceil(c_in_out * l * l * log_eta / (epsilon * epsilon));
        if (m < 1.0) m = 1.0;
        if (m > 9e15) return static_cast<std::size_t>(9e15);  // cap must bind
        double per_level = (std::sqrt(6.0 * m * big_l) + 4.0 * big_l) / m;
        if (per_level <= epsilon / l) return static_cast<std::size_t>(m);
        c_in_out *= 2.0;
    }
}

DrivestreamDistribution reduce(ReduceSource& src, const ReduceConfig& cfg,
                               ReduceDiagnostics* diag) {
    cfg.validate();
    const int levels = src.depth();
    const std::size_t rows = src.num_rows();

    if (levels == 0) {
        std::vector<Drivestream> entries{src.materialize(0)};
        std::vector<double> probs{1.0};
        if (diag) {
            diag->m = 1;
            diag->c_effective = cfg.c;
            diag->levels = 0;
            diag->row_drift.assign(rows, 0.0);
        }
        return DrivestreamDistribution(src.window_t(), src.window_h(),
                                       std::move(entries), std::move(probs));
    }

    double c_eff = cfg.c;
    std::size_t m = reduce_output_size(cfg.epsilon, levels, src.eta(), rows, c_eff);
    bool capped = false;
    if (cfg.size_cap > 0 && m > cfg.size_cap) {
        m = cfg.size_cap;
        capped = true;
    }

    if (diag) {
        diag->m = m;
        diag->c_effective = c_eff;
        diag->capped = capped;
        diag->levels = levels;
        diag->level_drift.clear();
        diag->row_drift.assign(rows, 0.0);
        diag->level_row_drift.clear();
    }

    std::vector<std::uint64_t> h(m, 0);  // multiset H_i
    std::vector<double> slab;            // distinct columns x rows, col-major
    std::vector<double> slab_u;
    std::vector<int> col_of(m);

    for (int i = 0; i < levels; ++i) {
        // Duplicate prefixes share one LAP column's data.
        std::unordered_map<std::uint64_t, int> distinct;
        distinct.reserve(m * 2);
        std::vector<std::uint64_t> order;
        for (std::size_t j = 0; j < m; ++j) {
            auto [it, fresh] = distinct.try_emplace(h[j], static_cast<int>(order.size()));
            if (fresh) order.push_back(h[j]);
            col_of[j] = it->second;
        }
        slab.assign(order.size() * rows, 0.0);
        slab_u.assign(order.size(), 0.0);
        src.fill_columns(order, i, slab.data(), slab_u.data());

        CeDiagnostics cd;
        auto provider = [&](std::size_t j) {
            int d = col_of[j];
            return CeColumnView{&slab[static_cast<std::size_t>(d) * rows], slab_u[d]};
        };
        std::vector<std::uint8_t> v = ce_round(rows, m, LapMode::Split, provider, &cd);

        for (std::size_t j = 0; j < m; ++j) h[j] = (h[j] << 1) | v[j];

        double worst = 0.0;
        std::vector<double> per_row;
        if (diag) per_row.resize(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            double drift = std::fabs(cd.signed_sum[r]) / static_cast<double>(m);
            if (drift > worst) worst = drift;
            if (diag) {
                diag->row_drift[r] += drift;
                per_row[r] = drift;
            }
        }
        if (diag) {
            diag->level_drift.push_back(worst);
            diag->level_row_drift.push_back(std::move(per_row));
        }
    }

    std::vector<Drivestream> entries;
    entries.reserve(m);
    std::uint64_t fallback = src.first_real_index();
    for (std::size_t j = 0; j < m; ++j) {
        std::uint64_t idx = h[j];
        if (src.index_prob(idx) == 0.0) idx = fallback;
        entries.push_back(src.materialize(idx));
    }
    std::vector<double> probs(m, 1.0 / static_cast<double>(m));
    return DrivestreamDistribution(src.window_t(), src.window_h(), std::move(entries),
                                   std::move(probs));
}

DrivestreamDistribution reduce(const DrivestreamDistribution& e, const Automaton& f,
                               const ProbabilitySpace& space, const WeightVector& w,
                               const ReduceConfig& cfg, ReduceDiagnostics* diag) {
    std::shared_ptr<const PredictionStructure> q = build_generic(e, f, space, w);
    PredictionReduceSource src(std::move(q), f.num_states(), {});
    return reduce(src, cfg, diag);
}

double sensitivity(const Automaton& f, const ProbabilitySpace& space,
                   const DrivestreamDistribution& e, int state, const WeightVector& w,
                   std::uint64_t guard) {
    if (e.size() > guard) throw GuardError("sensitivity: support exceeds guard");
    bool first = true;
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e.prob(i) == 0.0) continue;
        double val = w[walk(f, space, e.entry(i), state)];
        if (first) { lo = hi = val; first = false; }
        if (val < lo) lo = val;
        if (val > hi) hi = val;
    }
    return hi - lo;
}

}  // namespace autfool
