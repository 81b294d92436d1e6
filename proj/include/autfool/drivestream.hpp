#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "autfool/automaton.hpp"
#include "autfool/space.hpp"

namespace autfool {

// A run of symbols over window (t, h): symbol j has step t + j. Stored as
// indices into the owning space's per-step supports.
struct Drivestream {
    int t = 0;
    int h = 0;
    std::vector<int> sym_indices;

    Symbol symbol_at(const ProbabilitySpace& space, int j) const {
        return space.symbol(t + j, sym_indices[j]);
    }
};

// Runs the automaton across the window, left to right.
int walk(const Automaton& f, const ProbabilitySpace& space, const Drivestream& r,
         int state);

// Explicit support + probability list over drivestreams on one window.
// The entry count is always a power of two; padding entries duplicate the
// first entry with probability zero.
class DrivestreamDistribution {
  public:
    DrivestreamDistribution() = default;
    DrivestreamDistribution(int t, int h, std::vector<Drivestream> entries,
                            std::vector<double> probs);

    // Level-0 distribution: the step's own symbols, padded to a power of two.
    static DrivestreamDistribution from_step(const ProbabilitySpace& space, int t);

    int t() const { return t_; }
    int h() const { return h_; }
    std::size_t size() const { return entries_.size(); }
    int depth() const { return depth_; }  // lg size
    const Drivestream& entry(std::size_t i) const { return entries_[i]; }
    double prob(std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t first_real() const { return first_real_; }

    void validate() const;

    // Global counter of allocated entries; lets tests assert that merges
    // never materialize a Cartesian product.
    static std::int64_t entries_allocated();

  private:
    int t_ = 0, h_ = 0, depth_ = 0;
    std::vector<Drivestream> entries_;
    std::vector<double> probs_;
    std::size_t first_real_ = 0;
};

}  // namespace autfool
