#include "autfool/space.hpp"

#include <cmath>

namespace autfool {

void StepDistribution::validate() const {
    if (values.empty()) throw ValidationError("step distribution has empty support");
    if (values.size() != probs.size())
        throw ValidationError("step distribution values/probs size mismatch");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw ValidationError("negative or NaN step probability");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > tol().prob_sum)
        throw ValidationError("step probabilities do not sum to 1");
}

ProbabilitySpace::ProbabilitySpace(std::vector<StepDistribution> steps)
    : steps_(std::move(steps)), n_original_(static_cast<int>(steps_.size())) {}

long long ProbabilitySpace::sigma() const {
    long long s = 0;
    for (const auto& st : steps_) s += st.support_size();
    return s;
}

ProbabilitySpace ProbabilitySpace::padded_to_pow2() const {
    ProbabilitySpace out = *this;
    std::uint64_t n = steps_.size();
    std::uint64_t target = next_pow2(n == 0 ? 1 : n);
    while (out.steps_.size() < target) {
        StepDistribution pad;
        pad.values = {0};
        pad.probs = {1.0};
        out.steps_.push_back(pad);
    }
    out.n_original_ = n_original_;
    return out;
}

void ProbabilitySpace::validate() const {
    for (const auto& st : steps_) st.validate();
}

}  // namespace autfool
