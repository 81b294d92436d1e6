#pragma once

#include <functional>
#include <optional>

#include "autfool/fool.hpp"

namespace autfool {

// Parameters of one counter statistic sum_t f_t(r_t).
struct CounterSpec {
    std::vector<std::vector<long long>> f;  // f[t][sym_index]
    std::vector<double> mu;                 // per-step means
    std::vector<double> m_t;                // per-step max |f_t - mu_t|
    double m_max = 0.0;                     // M
    double kappa = 0.0;                     // sum of per-step variances
    double delta = 0.0;                     // tail parameter
    double b_scale = 100.0;                 // multiplier replacing the literal 100
    long long b = 0;                        // span
    std::vector<long long> anchors;         // anchors[t+1] = a_t; anchors[0] = 0

    // Derives mu, M_t, kappa and anchors from the step distributions and
    // picks B = ceil(b_scale * (1 + M + sqrt(kappa)) * log(n/delta)),
    // raised to b_floor when given.
    static CounterSpec build(const ProbabilitySpace& space,
                             std::vector<std::vector<long long>> f, double delta,
                             double b_scale,
                             std::optional<long long> b_floor = std::nullopt);

    // Anchor-relative increment applied at step t for symbol index i:
    // f_t(r) - a_t + a_{t-1}.
    long long increment(int t, int sym_index) const {
        return f[t][sym_index] - anchors[t + 1] + anchors[t];
    }
};

// Automaton over states {-B..B} u {bot}: state id c + B, bot = 2B + 1.
class TruncatedCounterAutomaton final : public Automaton {
  public:
    explicit TruncatedCounterAutomaton(CounterSpec spec);

    int next(int state, const Symbol& sym) const override;

    const CounterSpec& spec() const { return spec_; }
    long long span() const { return spec_.b; }
    int bot_state() const { return static_cast<int>(2 * spec_.b + 1); }
    int state_of(long long c) const { return static_cast<int>(c + spec_.b); }
    long long counter_of(int state) const { return state - spec_.b; }
    bool is_bot(int state) const { return state == bot_state(); }

  private:
    CounterSpec spec_;
};

// Exact-sum automaton used as the comparison oracle. State id = c + range;
// throws GuardError when the reachable range exceeds the guard.
class TruthfulCounterAutomaton final : public Automaton {
  public:
    TruthfulCounterAutomaton(CounterSpec spec, long long range_guard = 1 << 20);

    int next(int state, const Symbol& sym) const override;

    long long range() const { return range_; }
    // Largest |c| reachable from the start; walks beginning inside this
    // envelope never leave the doubled state space.
    long long inner_range() const { return inner_range_; }
    int state_of(long long c) const { return static_cast<int>(c + range_); }
    long long counter_of(int state) const { return state - range_; }
    const CounterSpec& spec() const { return spec_; }

  private:
    CounterSpec spec_;
    long long range_ = 0;
    long long inner_range_ = 0;
};

// Piecewise-linear damping: 1 inside |c| <= B/3, 0 outside |c| >= 2B/3.
double potential(long long c, long long b);
double potential_bot();

// W-tilde over truncated states: phi(c) W(c), 0 at bot.
WeightVector damped_weight(const std::function<double(long long)>& w,
                           const CounterSpec& spec);

struct TruncationReport {
    // Exact DP gaps |T~_{t,n}(c, W~) - T_{t,n}(c, W~)| per (t, state of F).
    double max_gap_a = 0.0;       // part (a), all states and times
    double gap_b = 0.0;           // part (b), start state at t = 0
    double delta_measured = 0.0;  // MC coupling-failure rate + 3 sigma
    double delta_big = 0.0;       // Delta = max |W|
    double delta_tilde = 0.0;     // max |W| over |c - a_t| <= 2B
    bool part_a_ok = false;       // max_gap_a <= delta_measured * Delta
    bool part_b_ok = false;
    // part (c): confusion of (F~, W~) vs L(c,t) + 2*Delta*delta + 6*Delta~*M_t/B
    double max_c_excess = 0.0;
    bool part_c_ok = false;
};

// Compares the truncated automaton against the truthful one by exact DP on
// both, with the coupling-failure probability measured by Monte Carlo.
TruncationReport truncation_error_report(const ProbabilitySpace& space,
                                         const CounterSpec& spec,
                                         const std::function<double(long long)>& w,
                                         long long range_guard = 1 << 16,
                                         int mc_samples = 20000);

// Reachable counter interval [lo, hi] at each time (no truncation applied).
std::vector<std::pair<long long, long long>> counter_reach(const CounterSpec& spec);

// Monte-Carlo estimate (plus 3 sigma) of the probability that some window
// partial sum of f - mu reaches 0.15 B.
double bernstein_escape_estimate(const ProbabilitySpace& space, const CounterSpec& spec,
                                 int samples, std::uint64_t seed = 0x5eedULL);

}  // namespace autfool
