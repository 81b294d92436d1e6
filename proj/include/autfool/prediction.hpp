#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "autfool/metrics.hpp"

namespace autfool {

// Prefix queries over a drivestream distribution D (or a virtual product
// E = D1 x D2): p(b*) and T_{D[b*]}(s, w). Bitstrings are the high bits of
// the entry index; they are passed as (value, length) pairs.
class PredictionStructure {
  public:
    virtual ~PredictionStructure() = default;

    // lg of the (padded) distribution size.
    virtual int depth() const = 0;

    // p_D(b*). len in [0, depth].
    virtual double query_prob(std::uint64_t b, int len) const = 0;

    // T_{D[b*]}(s, w); 0 when p(b*) = 0.
    virtual double query_expect(std::uint64_t b, int len, int state) const = 0;

    // Materializes entry `index` of the underlying distribution.
    virtual Drivestream materialize(std::uint64_t index) const = 0;

    // Window covered by the distribution.
    virtual int window_t() const = 0;
    virtual int window_h() const = 0;
};

// Dense per-level tables, one slot per prefix. Cost |D| * h * eta.
std::unique_ptr<PredictionStructure> build_generic(const DrivestreamDistribution& d,
                                                   const Automaton& f,
                                                   const ProbabilitySpace& space,
                                                   const WeightVector& w);

// Virtual product E = D1 x D2 on windows (t,h), (t+h,h); never materializes
// E. Queries with |b| <= lg|D1| answer from Q(D1, w2) with
// w2(s) = T_{D2}(s, w); longer ones split the bitstring.
std::unique_ptr<PredictionStructure> build_product(const DrivestreamDistribution& d1,
                                                   const DrivestreamDistribution& d2,
                                                   const Automaton& f,
                                                   const ProbabilitySpace& space,
                                                   const WeightVector& w);

}  // namespace autfool
