#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"

using namespace autfool;
using namespace autfool::testing;

namespace {

// Exact T_Omega(s, W) by the backward DP.
double omega_expectation(const ProbabilitySpace& space, const Automaton& f,
                         const WeightVector& w, int s) {
    return exact_suffix_expectations(space, f, w)[0][s];
}

}  // namespace

TEST_CASE("n = 1 degenerate run returns the step distribution") {
    std::vector<StepDistribution> steps(1);
    steps[0].values = {0, 1};
    steps[0].probs = {0.5, 0.5};
    ProbabilitySpace space{std::move(steps)};
    auto par = parity_automaton();
    WeightVector w = {1.0, 0.0};
    FoolConfig cfg;
    cfg.epsilon = 0.25;
    FoolResult fr = fool(space, *par, w, cfg);
    CHECK(fr.d.size() == 2);
    for (int s = 0; s < 2; ++s) {
        double td = expectation_over(fr.d, *par, space, s, w);
        CHECK(td == doctest::Approx(omega_expectation(space, *par, w, s)));
    }
}

TEST_CASE("n = 4 parity at eps = 1/2 with exact suffix vectors") {
    ProbabilitySpace space = uniform_bits(4);
    auto par = parity_automaton();
    WeightVector w = {1.0, 0.0};
    FoolConfig cfg;
    cfg.epsilon = 0.5;
    cfg.reduce_size_cap = 2048;
    FoolResult fr = fool(space, *par, w, cfg);
    AnalysisMetrics m = analysis_metrics(space, *par, w);
    for (int s = 0; s < 2; ++s) {
        double td = expectation_over(fr.d, *par, space, s, w);
        CHECK(std::fabs(td - 0.5) <= cfg.epsilon * m.variability[s] + 1e-9);
    }
}

TEST_CASE("n = 8 two-block counter product, per-block bound at eps = 1/4") {
    ProbabilitySpace space = uniform_bits(8);
    // Two clamped bit-sum counters with different caps.
    auto c1 = std::make_shared<FunctionAutomaton>(4, 0, [](int s, const Symbol& sym) {
        int v = s + static_cast<int>(sym.value);
        return v > 3 ? 3 : v;
    });
    auto c2 = std::make_shared<FunctionAutomaton>(3, 0, [](int s, const Symbol& sym) {
        int v = s + static_cast<int>(sym.value);
        return v > 2 ? 2 : v;
    });
    WeightVector w1 = {0.0, 0.25, 0.5, 1.0};
    WeightVector w2 = {0.0, 0.5, 1.0};
    ProductBuild pb = product_automaton({{c1, w1}, {c2, w2}});
    FoolConfig cfg;
    cfg.epsilon = 0.25;
    cfg.reduce_size_cap = 2048;
    FoolResult fr = fool(space, *pb.automaton, pb.weights, cfg);
    AnalysisMetrics m =
        analysis_metrics(space, *pb.automaton, pb.weights, 1ull << 20, false);
    auto v = exact_suffix_expectations(space, *pb.automaton, pb.weights);
    for (int b = 0; b < 2; ++b) {
        int s = pb.automaton->block_start_state(b);
        double td = expectation_over(fr.d, *pb.automaton, space, s, pb.weights);
        CHECK(std::fabs(td - v[0][s]) <= cfg.epsilon * m.variability[s] + 1e-9);
    }
}

TEST_CASE("random automata: nominal bound with exact vectors") {
    for (int n : {4, 8}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            ProbabilitySpace sp = random_space(n, 3, 7000 + seed * 17 + n);
            auto aut = random_automaton(sp, 6, 7100 + seed * 13 + n);
            WeightVector w = random_weights(6, 7200 + seed + n);
            FoolConfig cfg;
            cfg.epsilon = 0.5;
            cfg.reduce_size_cap = 2048;
            FoolResult fr = fool(sp, *aut, w, cfg);
            ProbabilitySpace padded = sp.padded_to_pow2();
            AnalysisMetrics m = analysis_metrics(padded, *aut, w, 1ull << 20, false);
            auto v = exact_suffix_expectations(padded, *aut, w);
            for (int s = 0; s < 6; ++s) {
                double td = expectation_over(fr.d, *aut, padded, s, w);
                CHECK(std::fabs(td - v[0][s]) <=
                      cfg.epsilon * m.variability[s] + 3.0 * fr.beta * padded.n() +
                          1e-9);
            }
        }
    }
}

TEST_CASE("perturbed suffix vectors: the 3 beta n term covers the damage") {
    ProbabilitySpace sp = random_space(8, 2, 8111);
    auto aut = random_automaton(sp, 5, 8112);
    WeightVector w = random_weights(5, 8113);
    VhatProvider exact = compute_vhat_exact_dp(sp, *aut, w);
    double beta0 = 0.02;
    VhatProvider noisy = exact;
    noisy.mode = VhatMode::ApplicationSupplied;
    for (int t = 0; t < sp.n(); ++t)  // keep V_n = W untouched
        for (int s = 0; s < 5; ++s)
            noisy.v[t][s] += ((t + s) % 2 ? beta0 : -beta0);
    noisy.beta = beta0 + exact.beta;
    FoolConfig cfg;
    cfg.epsilon = 0.25;
    cfg.reduce_size_cap = 2048;
    FoolResult fr = fool(sp, *aut, w, cfg, &noisy);
    AnalysisMetrics m = analysis_metrics(sp, *aut, w, 1ull << 20, false);
    auto v = exact_suffix_expectations(sp, *aut, w);
    for (int s = 0; s < 5; ++s) {
        double td = expectation_over(fr.d, *aut, sp, s, w);
        CHECK(std::fabs(td - v[0][s]) <=
              cfg.epsilon * m.variability[s] + 3.0 * noisy.beta * sp.n() + 1e-9);
    }
}

TEST_CASE("vhat provider validation") {
    ProbabilitySpace sp = uniform_bits(4);
    auto par = parity_automaton();
    WeightVector w = {1.0, 0.0};
    VhatProvider bad = compute_vhat_exact_dp(sp, *par, w);
    bad.v.pop_back();
    FoolConfig cfg;
    CHECK_THROWS_AS(fool(sp, *par, w, cfg, &bad), ValidationError);
    VhatProvider wrong_end = compute_vhat_exact_dp(sp, *par, w);
    wrong_end.v[4][0] += 1e-3;  // V_n must equal W exactly
    CHECK_THROWS_AS(fool(sp, *par, w, cfg, &wrong_end), ValidationError);
}

TEST_CASE("merges never materialize the product") {
    ProbabilitySpace sp = uniform_bits(8);
    auto par = parity_automaton();
    WeightVector w = {1.0, 0.0};
    FoolConfig cfg;
    cfg.epsilon = 0.5;
    cfg.reduce_size_cap = 512;
    std::int64_t before = DrivestreamDistribution::entries_allocated();
    FoolResult fr = fool(sp, *par, w, cfg);
    std::int64_t allocated = DrivestreamDistribution::entries_allocated() - before;
    // Every allocation is an Omega_t copy or a REDUCE output; a materialized
    // product at any level would cost 512 * 512 entries on its own.
    std::int64_t budget = 0;
    for (int t = 0; t < 8; ++t) budget += 2;        // level-0 steps
    budget += 15 * 512 * 2;                          // merge outputs, padded
    CHECK(allocated <= budget);
    CHECK(fr.d.size() <= 512);
}

TEST_CASE("suffix-expectation telescoping: alpha against confusion sums") {
    ProbabilitySpace sp = random_space(4, 2, 9100);
    auto aut = random_automaton(sp, 4, 9101);
    WeightVector w = random_weights(4, 9102);
    auto v = exact_suffix_expectations(sp, *aut, w);
    AnalysisMetrics m = analysis_metrics(sp, *aut, w, 1ull << 20, false);
    // alpha(s, V_{t+h}, Omega_{t,t+h}) <= 2 * sum over the window of the
    // worst per-step confusion over states reachable from s.
    for (int t = 0; t < 4; ++t) {
        for (int h = 1; t + h <= 4; ++h) {
            std::vector<Drivestream> entries;
            std::vector<double> probs;
            std::vector<int> idx(h, 0);
            for (;;) {
                Drivestream d{t, h, idx};
                double p = 1.0;
                for (int j = 0; j < h; ++j) p *= sp.step(t + j).probs[idx[j]];
                entries.push_back(d);
                probs.push_back(p);
                int j = h - 1;
                for (; j >= 0; --j) {
                    if (++idx[j] < sp.step(t + j).support_size()) break;
                    idx[j] = 0;
                }
                if (j < 0) break;
            }
            DrivestreamDistribution window(t, h, std::move(entries), std::move(probs));
            for (int s = 0; s < 4; ++s) {
                double alpha = sensitivity(*aut, sp, window, s, v[t + h]);
                auto reach = reachable_states(sp, *aut, {s});
                double rhs = 0.0;
                for (int k = t; k < t + h; ++k) {
                    double worst = 0.0;
                    for (int q : reach[k - t]) worst = std::max(worst, m.confusion[k][q]);
                    rhs += worst;
                }
                CHECK(alpha <= 2.0 * rhs + 1e-9);
            }
        }
    }
}

TEST_CASE("verify_fooling: restricted distribution and a negative control") {
    ProbabilitySpace sp = uniform_bits(4);
    auto par = parity_automaton();
    WeightVector w = {1.0, 0.0};
    DrivestreamDistribution full = full_space_distribution(sp);
    FoolVerifyReport ok = verify_fooling(full, sp, *par, w, 0.5, 0.0);
    CHECK(ok.ok);
    for (const auto& row : ok.rows) CHECK(row.slack == doctest::Approx(0.5 * 1.0));

    // Point mass on the worst drivestream: found by enumeration.
    std::size_t worst = 0;
    double worst_err = -1.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        double err = std::fabs(w[walk(*par, sp, full.entry(i), 0)] - 0.5);
        if (err > worst_err) { worst_err = err; worst = i; }
    }
    DrivestreamDistribution point(0, 4, {full.entry(worst)}, {1.0});
    FoolVerifyReport bad = verify_fooling(point, sp, *par, w, 0.25, 0.0);
    CHECK(!bad.ok);
    CHECK(bad.min_slack < 0.0);
}

TEST_CASE("fool result reports level sizes and drift") {
    ProbabilitySpace sp = uniform_bits(4);
    auto par = parity_automaton();
    WeightVector w = {1.0, 0.0};
    FoolConfig cfg;
    cfg.epsilon = 0.5;
    cfg.reduce_size_cap = 256;
    FoolResult fr = fool(sp, *par, w, cfg);
    CHECK(fr.level_sizes.size() == 3);  // levels 0..2
    CHECK(fr.delta == doctest::Approx(0.5 / (20.0 * 3.0)));
    CHECK(fr.merge_drift.size() == 3);  // 2 + 1 merges
    CHECK(fr.realized_drift >= 0.0);
}

TEST_CASE("vhat modes and reachability-restricted rows") {
    ProbabilitySpace sp = random_space(4, 3, 7777);
    auto aut = random_automaton(sp, 5, 7778);
    WeightVector w = random_weights(5, 7779);
    FoolConfig cfg;
    cfg.epsilon = 0.5;
    cfg.reduce_size_cap = 1024;
    cfg.vhat_mode = VhatMode::MatrixProduct;
    cfg.rows_from_start_reachability = true;
    FoolResult fr = fool(sp, *aut, w, cfg);
    AnalysisMetrics m = analysis_metrics(sp, *aut, w, 1ull << 20, false);
    auto v = exact_suffix_expectations(sp, *aut, w);
    int s = aut->start_state();
    double td = expectation_over(fr.d, *aut, sp, s, w);
    CHECK(std::fabs(td - v[0][s]) <=
          cfg.epsilon * m.variability[s] + 3.0 * fr.beta * sp.n() + 1e-9);

    cfg.vhat_mode = VhatMode::ApplicationSupplied;
    CHECK_THROWS_AS(fool(sp, *aut, w, cfg), ValidationError);
}

TEST_CASE("matrix-product suffix vectors: deterministic space and parity") {
    // Deterministic steps: V-hat_t(s) is the weight of the forced final state.
    std::vector<StepDistribution> steps(4);
    for (auto& st : steps) {
        st.values = {1};
        st.probs = {1.0};
    }
    ProbabilitySpace det{std::move(steps)};
    auto par = parity_automaton();
    WeightVector w = {1.0, 0.0};
    VhatProvider mp = compute_vhat_generic(det, *par, w);
    for (int t = 0; t <= 4; ++t)
        for (int s = 0; s < 2; ++s) {
            int fin = s;
            for (int k = t; k < 4; ++k) fin ^= 1;
            CHECK(mp.v[t][s] == doctest::Approx(w[fin]));
        }

    // Uniform bits and parity: every interior vector is identically 1/2.
    ProbabilitySpace bits = uniform_bits(8);
    VhatProvider mb = compute_vhat_generic(bits, *par, w);
    for (int t = 0; t < 8; ++t)
        for (int s = 0; s < 2; ++s) CHECK(mb.v[t][s] == doctest::Approx(0.5));
}
