#pragma once

#include <string>

#include "autfool/gale_berlekamp.hpp"
#include "autfool/maxcut.hpp"

namespace autfool {

// Shortest decimal that round-trips to the same double.
std::string fmt_double(double x);

// LAP instance: header "m n", m rows of n reals, then n reals u.
LapInstance parse_lap(const std::string& text);
std::string write_lap(const LapInstance& inst);

// GB matrix: line 1 n, then n lines of n entries +/-1.
GBInstance parse_gb(const std::string& text);
std::string write_gb(const GBInstance& inst);

// Graph: header "n m", then m lines "i j w" (0-based endpoints).
Graph parse_graph(const std::string& text);
std::string write_graph(const Graph& g);

// SDP solution: n lines of n reals (dimension equals the vertex count).
SdpSolution parse_sdp(const std::string& text, int n);
std::string write_sdp(const SdpSolution& sdp);

// fool-verify input: header "n eta start"; per step, the support size k
// followed by k lines "value prob"; then the transition table (one line of
// eta next-states per (step, symbol)); then eta weights.
struct FoolVerifyInput {
    ProbabilitySpace space;
    std::shared_ptr<Automaton> automaton;
    WeightVector weights;
};
FoolVerifyInput parse_fool_verify(const std::string& text);
std::string write_fool_verify(const ProbabilitySpace& space, const Automaton& f,
                              const WeightVector& w);

// Serialized drivestream distribution (window header, then one line per
// entry: probability followed by symbol indices).
std::string write_distribution(const DrivestreamDistribution& d);
DrivestreamDistribution parse_distribution(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace autfool
