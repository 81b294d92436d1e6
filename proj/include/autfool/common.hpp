#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace autfool {

// Validation failure on caller input (CLI exit code 2).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A size/feasibility guard refused to run (oracles, brute force).
struct GuardError : std::runtime_error {
    explicit GuardError(const std::string& msg) : std::runtime_error(msg) {}
};

// All float tolerances live here so drift budgets are explicit.
struct Tolerances {
    double prob_sum = 1e-12;        // step/drivestream distributions sum to 1
    double row_stochastic = 1e-10;  // transition matrix rows
    double disc_recompute = 1e-9;   // LAP discrepancy recomputation
    double sdp_unit_norm = 1e-8;    // SDP vector norms
    double vhat_fft_match = 1e-9;   // FFT vs direct suffix expectations
    double exact_match = 1e-12;     // cross-oracle equality checks
};

inline const Tolerances& tol() {
    static const Tolerances t;
    return t;
}

// Round half to even, used everywhere "nearest integer" appears.
inline long long round_half_even(double x) {
    double r = std::nearbyint(x);  // default FE_TONEAREST is half-to-even
    return static_cast<long long>(r);
}

// Deterministic 64-bit generator for seedless instance synthesis and
// Monte-Carlo harnesses. Not used anywhere on a certified code path.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0,1)
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    // standard normal via Box-Muller (deterministic)
    double normal() {
        double u1 = uniform(), u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }
};

inline bool is_pow2(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

inline std::uint64_t next_pow2(std::uint64_t x) {
    std::uint64_t p = 1;
    while (p < x) p <<= 1;
    return p;
}

inline int lg2_exact(std::uint64_t x) {
    int l = 0;
    while ((1ULL << l) < x) ++l;
    return l;
}

}  // namespace autfool
