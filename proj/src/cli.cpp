#include "autfool/cli.hpp"

#include <chrono>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "autfool/bench.hpp"
#include "autfool/io.hpp"
#include "autfool/parallel.hpp"

namespace autfool {

namespace {

using nlohmann::json;

json gb_report(const GBResult& r) {
    json out;
    out["x"] = r.x;
    out["y"] = r.y;
    out["imbalance"] = r.imbalance;
    out["certified_bound"] = r.certified_bound;
    out["distribution_size"] = r.distribution_size;
    out["ratio_to_n32"] = r.ratio_to_n32;
    out["epsilon"] = r.epsilon;
    out["span"] = r.span;
    out["error_ledger"] = {{"epsilon_term", r.epsilon * r.max_row_variability},
                           {"beta_term", 3.0 * r.beta},
                           {"measured_drift", r.realized_drift},
                           {"expected_row_weight", r.expected_row_weight}};
    return out;
}

json maxcut_report(const MaxcutResult& r) {
    json out;
    out["cut_bitmask"] = r.cut_bitmask;
    out["side"] = r.side;
    out["cut_weight"] = r.cut_weight;
    out["sdp_value"] = r.sdp_value;
    out["ratio_cut_over_sdp"] = r.ratio_cut_over_sdp;
    out["sum_model_cut"] = r.sum_model;
    out["distribution_size"] = r.distribution_size;
    out["epsilon_prime"] = r.epsilon_prime;
    out["gamma"] = r.gamma;
    out["truncation_radius"] = r.r_cut;
    out["max_states_per_edge"] = r.max_states_per_edge;
    json edges = json::array();
    for (const auto& e : r.edges) {
        edges.push_back({{"i", e.i},
                         {"j", e.j},
                         {"w", e.w},
                         {"dot", e.dot},
                         {"model_cut_prob", e.model_cut_prob},
                         {"expected_weight", e.expected_weight},
                         {"mean_weight_d", e.mean_weight_d},
                         {"variability", e.variability}});
    }
    out["per_edge_probs"] = edges;
    out["error_ledger"] = {{"epsilon_term", r.epsilon_prime},
                           {"beta_term", r.beta},
                           {"fft_mass", r.fft_mass},
                           {"measured_drift", r.realized_drift},
                           {"certified_cut_bound", r.certified_cut_bound}};
    return out;
}

struct Parsed {
    json report;
    int exit_code = 0;
    std::string out_path;
};

Parsed dispatch(const std::vector<std::string>& args) {
    CLI::App app{"deterministic automata-fooling toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    // gb
    auto* gb = app.add_subcommand("gb", "Gale-Berlekamp switching game");
    std::string gb_input;
    GBConfig gbc;
    bool seedless = false;
    gb->add_option("--input", gb_input, "matrix file")->required();
    gb->add_option("--epsilon-scale", gbc.epsilon_scale, "epsilon numerator");
    gb->add_option("--b-scale", gbc.b_scale, "span multiplier");
    gb->add_option("--size-cap", gbc.size_cap, "REDUCE output cap");
    gb->add_option("--reduce-C", gbc.reduce_c, "REDUCE size constant");
    gb->add_flag("--seedless", seedless, "assert the pipeline uses no RNG (always true)");

    // maxcut
    auto* mc = app.add_subcommand("maxcut", "SDP rounding for MAX-CUT");
    std::string mc_graph, mc_sdp;
    MaxcutConfig mcc;
    mc->add_option("--graph", mc_graph, "graph file")->required();
    mc->add_option("--sdp", mc_sdp, "SDP solution file")->required();
    mc->add_option("--epsilon", mcc.epsilon, "rounding accuracy");
    mc->add_option("--quant-C", mcc.quant_c, "quantization constant");
    mc->add_option("--b-scale", mcc.b_scale, "span multiplier");
    mc->add_option("--fft-threshold", mcc.fft_threshold, "direct-vs-FFT switch");
    mc->add_option("--size-cap", mcc.size_cap, "REDUCE output cap");
    mc->add_option("--reduce-C", mcc.reduce_c, "REDUCE size constant");
    mc->add_option("--eps-prime", mcc.eps_prime_override,
                   "override epsilon' (default epsilon/sqrt(n))");

    // lap-bench
    auto* lap = app.add_subcommand("lap-bench", "round one LAP instance");
    std::string lap_input;
    lap->add_option("--input", lap_input, "instance file")->required();

    // fool-verify
    auto* fv = app.add_subcommand("fool-verify", "run FOOL and verify its bound");
    std::string fv_input, fv_dump;
    double fv_eps = 0.25;
    double fv_reduce_c = 4.0;
    std::size_t fv_cap = 4096;
    fv->add_option("--input", fv_input, "automaton + space file")->required();
    fv->add_option("--epsilon", fv_eps, "fooling accuracy");
    fv->add_option("--size-cap", fv_cap, "REDUCE output cap");
    fv->add_option("--reduce-C", fv_reduce_c, "REDUCE size constant");
    fv->add_option("--dump-distribution", fv_dump, "write the distribution here");

    // bench
    auto* bn = app.add_subcommand("bench", "desk-scale measurements");
    std::string bn_suite = "all", bn_out;
    bn->add_option("--suite", bn_suite, "gb | lap | fft | workers | all");
    bn->add_option("--out", bn_out, "CSV output path");

    int workers = 1;
    std::string out_path;
    app.add_option("--workers", workers, "worker count (results identical for any)");
    app.add_option("--out", out_path, "write the JSON report here");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    app.parse(argv_rev);

    set_worker_count(workers);

    Parsed out;
    if (gb->parsed()) {
        GBInstance inst = parse_gb(read_file(gb_input));
        GBResult r = run_gb(inst, gbc);
        out.report = gb_report(r);
    } else if (mc->parsed()) {
        Graph g = parse_graph(read_file(mc_graph));
        SdpSolution sdp = parse_sdp(read_file(mc_sdp), g.n);
        MaxcutResult r = round_maxcut(g, sdp, mcc);
        out.report = maxcut_report(r);
    } else if (lap->parsed()) {
        LapInstance inst = parse_lap(read_file(lap_input));
        LapSolution sol = solve_real(inst);
        json rep;
        rep["v"] = sol.v;
        json rows = json::array();
        for (std::size_t k = 0; k < inst.m; ++k)
            rows.push_back({{"disc", sol.disc[k]},
                            {"mu_tilde", sol.mu_tilde[k]},
                            {"delta", sol.delta[k]},
                            {"bound", lap_real_bound(sol.delta[k], sol.mu_pos[k],
                                                     sol.mu_neg[k], inst.m)}});
        rep["rows"] = rows;
        out.report = rep;
    } else if (fv->parsed()) {
        FoolVerifyInput in = parse_fool_verify(read_file(fv_input));
        FoolConfig fc;
        fc.epsilon = fv_eps;
        fc.reduce_c = fv_reduce_c;
        fc.reduce_size_cap = fv_cap;
        ProbabilitySpace padded = in.space.padded_to_pow2();
        FoolResult fr = fool(padded, *in.automaton, in.weights, fc);
        FoolVerifyReport rep =
            verify_fooling(fr.d, padded, *in.automaton, in.weights, fv_eps, fr.beta);
        json jr;
        jr["epsilon"] = fv_eps;
        jr["beta"] = fr.beta;
        jr["distribution_size"] = fr.d.size();
        jr["min_slack"] = rep.min_slack;
        jr["ok"] = rep.ok;
        json slacks = json::array();
        for (const auto& row : rep.rows)
            slacks.push_back({{"state", row.state},
                              {"err", row.err},
                              {"bound", row.bound},
                              {"slack", row.slack}});
        jr["states"] = slacks;
        out.report = jr;
        if (!fv_dump.empty()) write_file(fv_dump, write_distribution(fr.d));
        if (!rep.ok) out.exit_code = 3;
    } else if (bn->parsed()) {
        std::vector<BenchRow> rows = run_bench(bn_suite);
        std::string csv = bench_csv(rows);
        if (!bn_out.empty()) write_file(bn_out, csv);
        json jr;
        jr["csv"] = csv;
        out.report = jr;
    }
    // Echo the semantic configuration; worker count and output path change
    // neither results nor the report body.
    out.report["config_echo"] = json::array();
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--workers" || args[i] == "--out") {
            ++i;
            continue;
        }
        out.report["config_echo"].push_back(args[i]);
    }
    out.out_path = out_path;
    return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    auto start = std::chrono::steady_clock::now();
    try {
        Parsed p = dispatch(args);
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        json full;
        full["report"] = p.report;
        full["timing"] = {{"seconds", secs}};
        std::string text = full.dump(2) + "\n";
        if (!p.out_path.empty()) write_file(p.out_path, text);
        std::cout << text;
        return p.exit_code;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const GuardError& e) {
        std::cerr << "guard refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

std::string report_body_for_test(const std::vector<std::string>& args) {
    Parsed p = dispatch(args);
    return p.report.dump(2);
}

}  // namespace autfool
