#include "autfool/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace autfool {

std::string fmt_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

struct TokenReader {
    std::istringstream in;
    explicit TokenReader(const std::string& text) : in(text) {}
    double real(const char* what) {
        double x;
        if (!(in >> x)) throw ValidationError(std::string("expected real: ") + what);
        return x;
    }
    long long integer(const char* what) {
        long long x;
        if (!(in >> x)) throw ValidationError(std::string("expected integer: ") + what);
        return x;
    }
};

}  // namespace

LapInstance parse_lap(const std::string& text) {
    TokenReader r(text);
    LapInstance inst;
    inst.m = static_cast<std::size_t>(r.integer("m"));
    inst.n = static_cast<std::size_t>(r.integer("n"));
    inst.rows.assign(inst.m, std::vector<double>(inst.n));
    for (auto& row : inst.rows)
        for (auto& x : row) x = r.real("matrix entry");
    inst.u.resize(inst.n);
    for (auto& x : inst.u) x = r.real("u entry");
    inst.validate();
    return inst;
}

std::string write_lap(const LapInstance& inst) {
    std::string out = std::to_string(inst.m) + " " + std::to_string(inst.n) + "\n";
    for (const auto& row : inst.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += " ";
            out += fmt_double(row[j]);
        }
        out += "\n";
    }
    for (std::size_t j = 0; j < inst.u.size(); ++j) {
        if (j) out += " ";
        out += fmt_double(inst.u[j]);
    }
    out += "\n";
    return out;
}

GBInstance parse_gb(const std::string& text) {
    TokenReader r(text);
    GBInstance inst;
    inst.n = static_cast<int>(r.integer("n"));
    if (inst.n < 1) throw ValidationError("GB n must be >= 1");
    inst.a.assign(inst.n, std::vector<int>(inst.n));
    for (auto& row : inst.a)
        for (auto& x : row) x = static_cast<int>(r.integer("matrix entry"));
    inst.validate();
    return inst;
}

std::string write_gb(const GBInstance& inst) {
    std::string out = std::to_string(inst.n) + "\n";
    for (const auto& row : inst.a) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += " ";
            out += std::to_string(row[j]);
        }
        out += "\n";
    }
    return out;
}

Graph parse_graph(const std::string& text) {
    TokenReader r(text);
    Graph g;
    g.n = static_cast<int>(r.integer("n"));
    std::size_t m = static_cast<std::size_t>(r.integer("m"));
    for (std::size_t k = 0; k < m; ++k) {
        Graph::Edge e;
        e.i = static_cast<int>(r.integer("edge i"));
        e.j = static_cast<int>(r.integer("edge j"));
        e.w = r.real("edge weight");
        g.edges.push_back(e);
    }
    g.validate();
    return g;
}

std::string write_graph(const Graph& g) {
    std::string out = std::to_string(g.n) + " " + std::to_string(g.edges.size()) + "\n";
    for (const auto& e : g.edges)
        out += std::to_string(e.i) + " " + std::to_string(e.j) + " " + fmt_double(e.w) +
               "\n";
    return out;
}

SdpSolution parse_sdp(const std::string& text, int n) {
    TokenReader r(text);
    SdpSolution sdp;
    sdp.n = n;
    sdp.dim = n;
    sdp.vectors.assign(n, std::vector<double>(n));
    for (auto& v : sdp.vectors)
        for (auto& x : v) x = r.real("sdp entry");
    sdp.validate();
    return sdp;
}

std::string write_sdp(const SdpSolution& sdp) {
    std::string out;
    for (const auto& v : sdp.vectors) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j) out += " ";
            out += fmt_double(v[j]);
        }
        out += "\n";
    }
    return out;
}

FoolVerifyInput parse_fool_verify(const std::string& text) {
    TokenReader r(text);
    int n = static_cast<int>(r.integer("n"));
    int eta = static_cast<int>(r.integer("eta"));
    int start = static_cast<int>(r.integer("start"));
    if (n < 1 || eta < 1 || start < 0 || start >= eta)
        throw ValidationError("bad fool-verify header");
    std::vector<StepDistribution> steps(n);
    for (int t = 0; t < n; ++t) {
        int k = static_cast<int>(r.integer("support size"));
        if (k < 1) throw ValidationError("empty step support");
        steps[t].values.resize(k);
        steps[t].probs.resize(k);
        for (int i = 0; i < k; ++i) {
            steps[t].values[i] = r.integer("symbol value");
            steps[t].probs[i] = r.real("symbol prob");
        }
    }
    std::vector<std::vector<std::vector<int>>> table(n);
    for (int t = 0; t < n; ++t) {
        table[t].resize(steps[t].values.size());
        for (auto& row : table[t]) {
            row.resize(eta);
            for (int s = 0; s < eta; ++s) {
                int v = static_cast<int>(r.integer("transition"));
                if (v < 0 || v >= eta)
                    throw ValidationError("transition target out of range");
                row[s] = v;
            }
        }
    }
    WeightVector w(eta);
    for (auto& x : w) x = r.real("weight");

    FoolVerifyInput out;
    out.space = ProbabilitySpace(std::move(steps));
    out.space.validate();
    out.automaton = std::make_shared<TableAutomaton>(eta, start, std::move(table));
    out.weights = std::move(w);
    return out;
}

std::string write_fool_verify(const ProbabilitySpace& space, const Automaton& f,
                              const WeightVector& w) {
    std::string out = std::to_string(space.n()) + " " + std::to_string(f.num_states()) +
                      " " + std::to_string(f.start_state()) + "\n";
    for (int t = 0; t < space.n(); ++t) {
        const StepDistribution& st = space.step(t);
        out += std::to_string(st.support_size()) + "\n";
        for (int i = 0; i < st.support_size(); ++i)
            out += std::to_string(st.values[i]) + " " + fmt_double(st.probs[i]) + "\n";
    }
    for (int t = 0; t < space.n(); ++t) {
        const StepDistribution& st = space.step(t);
        for (int i = 0; i < st.support_size(); ++i) {
            for (int s = 0; s < f.num_states(); ++s) {
                if (s) out += " ";
                out += std::to_string(f.next(s, space.symbol(t, i)));
            }
            out += "\n";
        }
    }
    for (int s = 0; s < f.num_states(); ++s) {
        if (s) out += " ";
        out += fmt_double(w[s]);
    }
    out += "\n";
    return out;
}

std::string write_distribution(const DrivestreamDistribution& d) {
    std::string out = std::to_string(d.t()) + " " + std::to_string(d.h()) + " " +
                      std::to_string(d.size()) + "\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        out += fmt_double(d.prob(i));
        for (int j = 0; j < d.h(); ++j)
            out += " " + std::to_string(d.entry(i).sym_indices[j]);
        out += "\n";
    }
    return out;
}

DrivestreamDistribution parse_distribution(const std::string& text) {
    TokenReader r(text);
    int t = static_cast<int>(r.integer("t"));
    int h = static_cast<int>(r.integer("h"));
    std::size_t count = static_cast<std::size_t>(r.integer("count"));
    std::vector<Drivestream> entries(count);
    std::vector<double> probs(count);
    for (std::size_t i = 0; i < count; ++i) {
        probs[i] = r.real("prob");
        entries[i].t = t;
        entries[i].h = h;
        entries[i].sym_indices.resize(h);
        for (int j = 0; j < h; ++j)
            entries[i].sym_indices[j] = static_cast<int>(r.integer("symbol index"));
    }
    return DrivestreamDistribution(t, h, std::move(entries), std::move(probs));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

}  // namespace autfool
