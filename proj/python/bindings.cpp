#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "autfool/io.hpp"
#include "autfool/parallel.hpp"

namespace py = pybind11;
using namespace autfool;

PYBIND11_MODULE(_autfool, m) {
    m.doc() = "deterministic automata-fooling toolkit";

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<GuardError>(m, "GuardError");

    m.def("set_worker_count", &set_worker_count);

    // --- lattice ---
    py::class_<LapSolution>(m, "LapSolution")
        .def_readonly("v", &LapSolution::v)
        .def_readonly("disc", &LapSolution::disc)
        .def_readonly("mu", &LapSolution::mu)
        .def_readonly("mu_tilde", &LapSolution::mu_tilde)
        .def_readonly("delta", &LapSolution::delta);
    m.def("solve_unit", [](const std::vector<std::vector<double>>& rows,
                           const std::vector<double>& u) {
        LapInstance inst{rows.size(), u.size(), rows, u};
        return solve_unit(inst);
    });
    m.def("solve_real", [](const std::vector<std::vector<double>>& rows,
                           const std::vector<double>& u) {
        LapInstance inst{rows.size(), u.size(), rows, u};
        return solve_real(inst);
    });
    m.def("discrepancy", &discrepancy);
    m.def("lap_unit_bound", &lap_unit_bound);
    m.def("lap_real_bound", &lap_real_bound);

    // --- counters ---
    m.def("potential", &potential);

    // --- gale-berlekamp ---
    py::class_<GBResult>(m, "GBResult")
        .def_readonly("x", &GBResult::x)
        .def_readonly("y", &GBResult::y)
        .def_readonly("imbalance", &GBResult::imbalance)
        .def_readonly("certified_bound", &GBResult::certified_bound)
        .def_readonly("distribution_size", &GBResult::distribution_size)
        .def_readonly("ratio_to_n32", &GBResult::ratio_to_n32);
    m.def("run_gb", [](const std::vector<std::vector<int>>& a, double epsilon_scale,
                       double b_scale, std::size_t size_cap) {
        GBInstance inst{static_cast<int>(a.size()), a};
        GBConfig cfg;
        cfg.epsilon_scale = epsilon_scale;
        cfg.b_scale = b_scale;
        cfg.size_cap = size_cap;
        return run_gb(inst, cfg);
    }, py::arg("a"), py::arg("epsilon_scale") = 1.0, py::arg("b_scale") = 3.0,
       py::arg("size_cap") = 1024);
    m.def("imbalance", [](const std::vector<std::vector<int>>& a,
                          const std::vector<int>& x, const std::vector<int>& y) {
        GBInstance inst{static_cast<int>(a.size()), a};
        return imbalance(inst, x, y);
    });
    m.def("gb_expected_weight_oracle", &gb_expected_weight_oracle);

    // --- maxcut ---
    m.def("star_product", &star_product);
    py::class_<MaxcutResult>(m, "MaxcutResult")
        .def_readonly("side", &MaxcutResult::side)
        .def_readonly("cut_weight", &MaxcutResult::cut_weight)
        .def_readonly("sdp_value", &MaxcutResult::sdp_value)
        .def_readonly("sum_model", &MaxcutResult::sum_model)
        .def_readonly("distribution_size", &MaxcutResult::distribution_size);
    m.def("round_maxcut",
          [](int n, const std::vector<std::tuple<int, int, double>>& edges,
             const std::vector<std::vector<double>>& vectors, double epsilon,
             double quant_c, double b_scale, std::size_t size_cap) {
              Graph g;
              g.n = n;
              for (const auto& [i, j, w] : edges) g.edges.push_back({i, j, w});
              SdpSolution sdp;
              sdp.n = n;
              sdp.dim = static_cast<int>(vectors.empty() ? 0 : vectors[0].size());
              sdp.vectors = vectors;
              MaxcutConfig cfg;
              cfg.epsilon = epsilon;
              cfg.quant_c = quant_c;
              cfg.b_scale = b_scale;
              cfg.size_cap = size_cap;
              return round_maxcut(g, sdp, cfg);
          },
          py::arg("n"), py::arg("edges"), py::arg("vectors"), py::arg("epsilon") = 0.3,
          py::arg("quant_c") = 1.2, py::arg("b_scale") = 0.1,
          py::arg("size_cap") = 256);
    m.def("brute_force_maxcut",
          [](int n, const std::vector<std::tuple<int, int, double>>& edges) {
              Graph g;
              g.n = n;
              for (const auto& [i, j, w] : edges) g.edges.push_back({i, j, w});
              return brute_force_maxcut(g);
          });

    // --- reduce / fool over table automata ---
    m.def("fool_table_automaton",
          [](const std::vector<std::vector<long long>>& values,
             const std::vector<std::vector<double>>& probs,
             const std::vector<std::vector<std::vector<int>>>& table, int eta,
             int start, const std::vector<double>& weights, double epsilon,
             std::size_t size_cap) {
              std::vector<StepDistribution> steps(values.size());
              for (std::size_t t = 0; t < values.size(); ++t) {
                  steps[t].values = values[t];
                  steps[t].probs = probs[t];
              }
              ProbabilitySpace space =
                  ProbabilitySpace(std::move(steps)).padded_to_pow2();
              TableAutomaton aut(eta, start, table);
              FoolConfig cfg;
              cfg.epsilon = epsilon;
              cfg.reduce_size_cap = size_cap;
              FoolResult fr = fool(space, aut, weights, cfg);
              FoolVerifyReport rep =
                  verify_fooling(fr.d, space, aut, weights, epsilon, fr.beta);
              return py::make_tuple(fr.d.size(), rep.min_slack, rep.ok);
          });
}
