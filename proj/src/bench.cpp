#include "autfool/bench.hpp"

#include <chrono>

#include "autfool/cli.hpp"
#include "autfool/io.hpp"
#include "autfool/parallel.hpp"

namespace autfool {

namespace {

double now_seconds(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

GBInstance synth_gb(int n) {
    SplitMix64 rng(0x6b00ULL + n);
    GBInstance inst;
    inst.n = n;
    inst.a.assign(n, std::vector<int>(n));
    for (auto& row : inst.a)
        for (auto& x : row) x = rng.next() & 1 ? 1 : -1;
    return inst;
}

LapInstance synth_lap(std::size_t m, std::size_t n) {
    SplitMix64 rng(0x1a9ULL + m);
    LapInstance inst;
    inst.m = m;
    inst.n = n;
    inst.rows.assign(m, std::vector<double>(n));
    for (auto& row : inst.rows)
        for (auto& x : row) x = 2.0 * rng.uniform() - 1.0;
    inst.u.resize(n);
    for (auto& x : inst.u) x = rng.uniform();
    return inst;
}

void bench_gb(std::vector<BenchRow>& rows) {
    for (int n : {8, 16, 32}) {
        GBInstance inst = synth_gb(n);
        GBConfig cfg;
        cfg.size_cap = 1024;
        auto start = std::chrono::steady_clock::now();
        GBResult r = run_gb(inst, cfg);
        double secs = now_seconds(start);
        rows.push_back({"gb", "n" + std::to_string(n), worker_count(), secs,
                        "ratio_to_n32", r.ratio_to_n32});
        rows.push_back({"gb", "n" + std::to_string(n), worker_count(), secs,
                        "distribution_size", static_cast<double>(r.distribution_size)});
    }
}

void bench_lap(std::vector<BenchRow>& rows) {
    for (std::size_t n : {64, 128, 256}) {
        LapInstance inst = synth_lap(n, n);
        auto start = std::chrono::steady_clock::now();
        LapSolution sol = solve_real(inst);
        double secs = now_seconds(start);
        double worst = 0.0;
        for (std::size_t k = 0; k < inst.m; ++k)
            worst = std::max(worst, sol.disc[k] / lap_real_bound(sol.delta[k],
                                                                 sol.mu_pos[k],
                                                                 sol.mu_neg[k], inst.m));
        rows.push_back({"lap", "mn" + std::to_string(n), worker_count(), secs,
                        "worst_bound_fraction", worst});
    }
}

void bench_fft(std::vector<BenchRow>& rows) {
    // Pentagon embedding exercises both suffix-expectation paths.
    Graph g;
    g.n = 5;
    for (int k = 0; k < 5; ++k) g.edges.push_back({k, (k + 1) % 5, 1.0});
    SdpSolution sdp;
    sdp.n = 5;
    sdp.dim = 5;
    sdp.vectors.assign(5, std::vector<double>(5, 0.0));
    for (int k = 0; k < 5; ++k) {
        double ang = 4.0 * 3.14159265358979323846 * k / 5.0;
        sdp.vectors[k][0] = std::cos(ang);
        sdp.vectors[k][1] = std::sin(ang);
    }
    MaxcutConfig cfg;
    cfg.quant_c = 1.1;
    QuantizationParams qp = QuantizationParams::make(cfg.epsilon, cfg.quant_c, g.n);
    StepDistribution alpha = gaussian_alphabet(qp);
    std::vector<StepDistribution> steps(sdp.dim, alpha);
    ProbabilitySpace space = ProbabilitySpace(std::move(steps)).padded_to_pow2();
    std::vector<EdgeContext> ctx = build_edge_contexts(g, sdp, cfg, space, qp);

    auto start = std::chrono::steady_clock::now();
    EdgeVhat fft = compute_vhat_fft(ctx[0], space, cfg.epsilon, qp.gamma, 1);
    double t_fft = now_seconds(start);
    start = std::chrono::steady_clock::now();
    EdgeVhat direct = compute_vhat_direct(ctx[0], space, cfg.epsilon, qp.gamma);
    double t_direct = now_seconds(start);
    double diff = 0.0;
    for (int i = 0; i < fft.v[0].ni; ++i)
        for (int j = 0; j < fft.v[0].nj; ++j)
            diff = std::max(diff, std::fabs(fft.v[0].v[i * fft.v[0].nj + j] -
                                            direct.v[0].v[i * fft.v[0].nj + j]));
    rows.push_back({"fft", "pentagon_edge", worker_count(), t_fft, "max_abs_diff", diff});
    rows.push_back({"fft", "pentagon_edge_direct", worker_count(), t_direct,
                    "max_abs_diff", diff});
}

void bench_workers(std::vector<BenchRow>& rows) {
    GBInstance inst = synth_gb(8);
    std::string path = "/tmp/autfool_bench_gb8.txt";
    write_file(path, write_gb(inst));
    int saved = worker_count();
    set_worker_count(1);
    std::string a = report_body_for_test({"gb", "--input", path, "--size-cap", "256"});
    set_worker_count(8);
    std::string b = report_body_for_test({"gb", "--input", path, "--size-cap", "256"});
    set_worker_count(saved);
    rows.push_back({"workers", "gb8_identical", saved, 0.0, "byte_identical",
                    a == b ? 1.0 : 0.0});
}

}  // namespace

std::vector<BenchRow> run_bench(const std::string& suite) {
    std::vector<BenchRow> rows;
    if (suite == "gb" || suite == "all") bench_gb(rows);
    if (suite == "lap" || suite == "all") bench_lap(rows);
    if (suite == "fft" || suite == "all") bench_fft(rows);
    if (suite == "workers" || suite == "all") bench_workers(rows);
    if (rows.empty()) throw ValidationError("unknown bench suite: " + suite);
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "suite,case,workers,seconds,metric,value\n";
    for (const auto& r : rows)
        out += r.suite + "," + r.name + "," + std::to_string(r.workers) + "," +
               fmt_double(r.seconds) + "," + r.metric + "," + fmt_double(r.value) + "\n";
    return out;
}

}  // namespace autfool
