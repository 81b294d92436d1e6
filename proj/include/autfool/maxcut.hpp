#pragma once

#include "autfool/counter_merge.hpp"
#include "autfool/counters.hpp"
#include "autfool/fft.hpp"

namespace autfool {

struct QuantizationParams {
    double epsilon = 0.3;
    double c = 1.0;
    double gamma = 0.0;  // eps / (C sqrt(n log(n/eps)))
    double r = 0.0;      // C log(n/eps)

    static QuantizationParams make(double epsilon, double c, int n);
};

// Truncated, gamma-quantized standard Gaussian; symbol value k stands for
// the real k*gamma. Tail mass lands on the 0 symbol.
StepDistribution gaussian_alphabet(const QuantizationParams& qp);

struct Graph {
    struct Edge {
        int i = 0, j = 0;
        double w = 1.0;
    };
    int n = 0;
    std::vector<Edge> edges;
    void validate() const;
};

struct SdpSolution {
    int n = 0;    // vertices
    int dim = 0;  // embedding dimension = drivestream length
    std::vector<std::vector<double>> vectors;
    void validate() const;
};

// Quantized inner product gamma * sum_k round(v_k r_k / gamma), ties half
// to even.
double star_product(const std::vector<double>& v, const std::vector<double>& r,
                    double gamma);

// Pessimistic-estimator weight of an edge-automaton state (c_i, c_j);
// bot flags mark rejected coordinates.
double edge_weight(bool bot_i, bool bot_j, long long ci, long long cj, double eps,
                   double gamma, long long bi, long long bj);

// Product of two truncated counters driven by the same stream.
class EdgeAutomaton final : public Automaton {
  public:
    EdgeAutomaton(CounterSpec spec_i, CounterSpec spec_j);
    int next(int state, const Symbol& sym) const override;

    long long bi() const { return si_.b; }
    long long bj() const { return sj_.b; }
    int encode(long long ci, long long cj, bool bot_i, bool bot_j) const;
    void decode(int state, long long& ci, long long& cj, bool& bot_i,
                bool& bot_j) const;

  private:
    CounterSpec si_, sj_;
    int wi_, wj_;  // states per coordinate = 2B + 2
};

struct MaxcutConfig {
    double epsilon = 0.3;
    double quant_c = 1.0;
    double b_scale = 0.07;
    std::size_t fft_threshold = 1 << 16;
    std::size_t size_cap = 256;
    double reduce_c = 4.0;
    int rows_per_axis = 49;      // LAP row bucket cap per lattice axis
    double eps_prime_override = 0.0;  // 0: use epsilon / sqrt(n)
    bool with_variability = true;     // measured per-edge variability report
};

struct EdgeReport {
    int i = 0, j = 0;
    double w = 1.0;
    double dot = 0.0;             // v_i . v_j
    double model_cut_prob = 0.0;  // arccos(dot)/pi
    double expected_weight = 0.0; // E_Omega[W~] from the DP
    double mean_weight_d = 0.0;   // average W~ over the output distribution
    double variability = 0.0;     // measured total variability (0 if skipped)
};

struct MaxcutResult {
    std::vector<int> side;  // 0/1 per vertex
    std::uint64_t cut_bitmask = 0;  // valid for n <= 64
    double cut_weight = 0.0;
    double sdp_value = 0.0;
    double ratio_cut_over_sdp = 0.0;
    double sum_model = 0.0;  // sum_e w_e arccos(v_i . v_j)/pi
    std::vector<EdgeReport> edges;
    double epsilon_prime = 0.0;
    double beta = 0.0;
    double fft_mass = 0.0;
    std::size_t distribution_size = 0;
    double realized_drift = 0.0;
    double certified_cut_bound = 0.0;
    long long max_states_per_edge = 0;
    double gamma = 0.0, r_cut = 0.0;
};

MaxcutResult round_maxcut(const Graph& g, const SdpSolution& sdp,
                          const MaxcutConfig& cfg);

double cut_weight_of(const Graph& g, const std::vector<int>& side);
// Exact optimum by enumeration; n <= 22.
std::pair<std::vector<int>, double> brute_force_maxcut(const Graph& g);

// Per-edge suffix expectations over the pair-increment lattice. v[t] holds
// V-hat_t; all t in [0, n] are populated.
struct EdgeVhat {
    std::vector<Grid2D> v;
    double fft_mass = 0.0;
};

struct EdgeContext {
    int i = 0, j = 0;
    // inc[axis][t][sym_index] quantized increments, anchors are zero by
    // alphabet symmetry.
    std::array<std::vector<std::vector<long long>>, 2> inc;
    std::vector<long long> reach_i, reach_j;  // cumulative max |inc| per time
    long long bi = 0, bj = 0;
    double w = 1.0;
    double dot = 0.0;
};

EdgeVhat compute_vhat_fft(const EdgeContext& e, const ProbabilitySpace& space,
                          double eps, double gamma, std::size_t fft_threshold);
EdgeVhat compute_vhat_direct(const EdgeContext& e, const ProbabilitySpace& space,
                             double eps, double gamma);

// Builds the per-edge contexts (alphabet increments, spans, reach bounds)
// used by both vhat paths and the rounding pipeline.
std::vector<EdgeContext> build_edge_contexts(const Graph& g, const SdpSolution& sdp,
                                             const MaxcutConfig& cfg,
                                             const ProbabilitySpace& space,
                                             const QuantizationParams& qp);

struct CouplingCheck {
    double exceed_rate = 0.0;
    double wilson_upper = 0.0;
    int samples = 0;
};

// Monte-Carlo comparison of u . X against u * r under the natural coupling.
CouplingCheck coupling_check(const std::vector<double>& u, double eps,
                             const QuantizationParams& qp, int samples,
                             std::uint64_t seed = 0x9d2c5680ULL);

}  // namespace autfool
