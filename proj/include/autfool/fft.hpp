#pragma once

#include <cstddef>
#include <vector>

namespace autfool {

// Dense 2-D array with an integer-lattice offset; ni x nj, row-major.
struct Grid2D {
    long long lo_i = 0, lo_j = 0;
    int ni = 0, nj = 0;
    std::vector<double> v;

    double at(long long i, long long j) const {
        if (i < lo_i || i >= lo_i + ni || j < lo_j || j >= lo_j + nj) return 0.0;
        return v[static_cast<std::size_t>(i - lo_i) * nj + (j - lo_j)];
    }
    double& cell(long long i, long long j) {
        return v[static_cast<std::size_t>(i - lo_i) * nj + (j - lo_j)];
    }
    double sum() const;
};

struct ConvStats {
    bool used_fft = false;
    double clamped_mass = 0.0;  // negatives removed + renormalization shift
};

// Full 2-D convolution. Direct below the threshold (output cells times
// kernel size), FFT via fftw above it. FFT negatives are clamped to zero
// and the result renormalized; the shifted mass is reported.
Grid2D conv2d(const Grid2D& a, const Grid2D& b, std::size_t fft_threshold,
              ConvStats* stats = nullptr);

// Correlation c(x) = sum_d k(d) f(x + d) evaluated over the given output
// box; used for top-down suffix vectors. Signed-safe (no clamping).
Grid2D correlate2d(const Grid2D& kernel, const Grid2D& f, long long out_lo_i,
                   long long out_lo_j, int out_ni, int out_nj,
                   std::size_t fft_threshold);

}  // namespace autfool
