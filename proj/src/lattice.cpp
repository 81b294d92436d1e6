#include "autfool/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace autfool {

void LapInstance::validate() const {
    if (rows.size() != m) throw ValidationError("LAP row count mismatch");
    for (const auto& r : rows)
        if (r.size() != n) throw ValidationError("LAP row length mismatch");
    if (u.size() != n) throw ValidationError("LAP u length mismatch");
    for (double x : u)
        if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("LAP u entry outside [0,1]");
    for (const auto& r : rows)
        for (double a : r)
            if (!std::isfinite(a)) throw ValidationError("LAP entry not finite");
}

double lap_unit_bound(double mu, std::size_t est_rows) {
    double l = std::log(4.0 * static_cast<double>(est_rows < 1 ? 1 : est_rows));
    return std::sqrt(3.0 * (mu > 0 ? mu : 0.0) * l) + 2.0 * l;
}

double lap_real_bound(double delta, double mu_pos, double mu_neg, std::size_t m) {
    if (delta <= 0.0) return 0.0;
    return delta * (lap_unit_bound(mu_pos / delta, 2 * m) +
                    lap_unit_bound(mu_neg / delta, 2 * m));
}

namespace {

constexpr double kFlush = 1e-290;

// One two-sided pessimistic-estimator row. U tracks e^{+lambda S}, V tracks
// e^{-lambda S}, both divided by the running product of one-step MGFs so the
// pair is a martingale under Bernoulli(u) choices.
struct EstRow {
    double u = 1.0, v = 1.0;
    double lambda = 1.0;
};

inline void apply(EstRow& r, double x, double uj, bool take_one) {
    // x = lambda * entry, entry in [0,1]
    double b = std::exp(-x);
    double q = (1.0 - uj) + uj * b;
    double qb = (1.0 - uj) + uj / b;
    if (take_one) {
        r.u *= b / q;
        r.v *= 1.0 / (b * qb);
    } else {
        r.u *= 1.0 / q;
        r.v *= 1.0 / qb;
    }
    if (r.u < kFlush) r.u = 0.0;
    if (r.v < kFlush) r.v = 0.0;
}

// Contribution of this row to Phi under each choice, minus its current
// value (rows untouched by the column cancel in the comparison).
inline void options(const EstRow& r, double x, double uj, double& phi0, double& phi1) {
    double b = std::exp(-x);
    double q = (1.0 - uj) + uj * b;
    double qb = (1.0 - uj) + uj / b;
    phi0 += r.u / q + r.v / qb;
    phi1 += r.u * b / q + r.v / (b * qb);
}

}  // namespace

std::vector<std::uint8_t> ce_round(std::size_t rows, std::size_t cols, LapMode mode,
                                   const std::function<CeColumnView(std::size_t)>& col,
                                   CeDiagnostics* diag) {
    const bool split = mode == LapMode::Split;

    std::vector<double> delta(rows, 0.0), mu_pos(rows, 0.0), mu_neg(rows, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
        CeColumnView c = col(j);
        if (!(c.u >= 0.0 && c.u <= 1.0))
            throw ValidationError("sampling rate outside [0,1]");
        for (std::size_t k = 0; k < rows; ++k) {
            double a = c.a[k];
            if (a == 0.0) continue;
            if (!split && !(a >= 0.0 && a <= 1.0))
                throw ValidationError("unit LAP entry outside [0,1]");
            double aa = std::fabs(a);
            if (aa > delta[k]) delta[k] = aa;
            if (a > 0.0) mu_pos[k] += a * c.u;
            else mu_neg[k] += aa * c.u;
        }
    }

    // Estimator rows: one per row in unit mode (entries already in [0,1]),
    // a +/- pair per row in split mode (entries rescaled by delta).
    std::size_t est_rows_per = split ? 2 : 1;
    std::vector<EstRow> est(rows * est_rows_per);
    std::size_t r_count = split ? 2 * rows : rows;
    double l4r = std::log(4.0 * static_cast<double>(r_count < 1 ? 1 : r_count));
    for (std::size_t k = 0; k < rows; ++k) {
        if (split) {
            double dp = delta[k];
            double mp = dp > 0 ? mu_pos[k] / dp : 0.0;
            double mn = dp > 0 ? mu_neg[k] / dp : 0.0;
            est[2 * k].lambda = mp > 0 ? std::min(1.0, std::sqrt(l4r / mp)) : 1.0;
            est[2 * k + 1].lambda = mn > 0 ? std::min(1.0, std::sqrt(l4r / mn)) : 1.0;
        } else {
            double mu = mu_pos[k];
            est[k].lambda = mu > 0 ? std::min(1.0, std::sqrt(l4r / mu)) : 1.0;
        }
    }

    std::vector<std::uint8_t> v(cols, 0);
    std::vector<double> signed_sum(rows, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
        CeColumnView c = col(j);
        bool take_one;
        if (c.u <= 0.0) {
            take_one = false;  // Bernoulli(0) is settled
        } else if (c.u >= 1.0) {
            take_one = true;
        } else {
            double phi0 = 0.0, phi1 = 0.0;
            for (std::size_t k = 0; k < rows; ++k) {
                double a = c.a[k];
                if (a == 0.0) continue;
                if (split) {
                    std::size_t e = a > 0.0 ? 2 * k : 2 * k + 1;
                    double x = est[e].lambda * std::fabs(a) / delta[k];
                    options(est[e], x, c.u, phi0, phi1);
                } else {
                    options(est[k], est[k].lambda * a, c.u, phi0, phi1);
                }
            }
            take_one = phi1 < phi0;  // tie -> 0
        }
        v[j] = take_one ? 1 : 0;
        double shift = c.u - (take_one ? 1.0 : 0.0);
        for (std::size_t k = 0; k < rows; ++k) {
            double a = c.a[k];
            if (a == 0.0) continue;
            signed_sum[k] += a * shift;
            if (split) {
                std::size_t e = a > 0.0 ? 2 * k : 2 * k + 1;
                apply(est[e], est[e].lambda * std::fabs(a) / delta[k], c.u, take_one);
            } else {
                apply(est[k], est[k].lambda * a, c.u, take_one);
            }
        }
    }

    if (diag) {
        diag->signed_sum = std::move(signed_sum);
        diag->delta = std::move(delta);
        diag->mu_pos = std::move(mu_pos);
        diag->mu_neg = std::move(mu_neg);
    }
    return v;
}

namespace {

LapSolution solve_with_mode(const LapInstance& inst, LapMode mode) {
    inst.validate();
    // Column-major copy so the streaming core can hand out pointers.
    std::vector<double> colmaj(inst.n * inst.m);
    for (std::size_t k = 0; k < inst.m; ++k)
        for (std::size_t j = 0; j < inst.n; ++j) colmaj[j * inst.m + k] = inst.rows[k][j];

    CeDiagnostics diag;
    auto provider = [&](std::size_t j) {
        return CeColumnView{&colmaj[j * inst.m], inst.u[j]};
    };
    LapSolution sol;
    sol.v = ce_round(inst.m, inst.n, mode, provider, &diag);

    sol.disc.resize(inst.m);
    sol.mu.assign(inst.m, 0.0);
    sol.mu_tilde.resize(inst.m);
    sol.mu_pos = diag.mu_pos;
    sol.mu_neg = diag.mu_neg;
    sol.delta = diag.delta;
    for (std::size_t k = 0; k < inst.m; ++k) {
        sol.disc[k] = std::fabs(diag.signed_sum[k]);
        sol.mu_tilde[k] = diag.mu_pos[k] + diag.mu_neg[k];
        if (mode == LapMode::Unit) sol.mu[k] = diag.mu_pos[k];
        double bound = mode == LapMode::Unit
                           ? lap_unit_bound(sol.mu[k], inst.m)
                           : lap_real_bound(sol.delta[k], diag.mu_pos[k],
                                            diag.mu_neg[k], inst.m);
        if (sol.disc[k] > bound + 1e-9)
            throw std::logic_error("LAP estimator failed its certified bound");
    }
    return sol;
}

}  // namespace

LapSolution solve_unit(const LapInstance& inst) {
    for (const auto& r : inst.rows)
        for (double a : r)
            if (!(a >= 0.0 && a <= 1.0))
                throw ValidationError("solve_unit requires entries in [0,1]");
    return solve_with_mode(inst, LapMode::Unit);
}

LapSolution solve_real(const LapInstance& inst) { return solve_with_mode(inst, LapMode::Split); }

std::vector<double> discrepancy(const std::vector<std::vector<double>>& a,
                                const std::vector<double>& u,
                                const std::vector<std::uint8_t>& v) {
    std::vector<double> out(a.size(), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a[k].size(); ++j)
            acc += a[k][j] * (u[j] - (v[j] ? 1.0 : 0.0));
        out[k] = std::fabs(acc);
    }
    return out;
}

}  // namespace autfool
