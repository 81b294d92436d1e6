#pragma once

#include <cstdint>
#include <vector>

#include "autfool/common.hpp"

namespace autfool {

// One alphabet symbol: the time step it belongs to, its index within the
// step's support, and its integer payload. Clock-carrying alphabets make a
// separate clock input unnecessary.
struct Symbol {
    int step = 0;
    int index = 0;
    long long value = 0;
};

// Distribution of one step's symbol. Probabilities sum to 1 within tol.
struct StepDistribution {
    std::vector<long long> values;
    std::vector<double> probs;

    int support_size() const { return static_cast<int>(values.size()); }
    Symbol symbol(int step, int index) const { return Symbol{step, index, values[index]}; }
    void validate() const;
};

// Product space over n independent steps. n is padded to a power of two by
// trailing singleton steps (value 0, probability 1); automata built through
// this library ignore padding steps.
class ProbabilitySpace {
  public:
    ProbabilitySpace() = default;
    explicit ProbabilitySpace(std::vector<StepDistribution> steps);

    int n() const { return static_cast<int>(steps_.size()); }
    int n_original() const { return n_original_; }
    const StepDistribution& step(int t) const { return steps_[t]; }
    Symbol symbol(int t, int index) const { return steps_[t].symbol(t, index); }
    bool is_padding_step(int t) const { return t >= n_original_; }

    // sigma = sum of support sizes, padding included.
    long long sigma() const;

    // Returns a copy padded so n is a power of two.
    ProbabilitySpace padded_to_pow2() const;

    void validate() const;

  private:
    std::vector<StepDistribution> steps_;
    int n_original_ = 0;
};

}  // namespace autfool
