#include "autfool/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace autfool {

double Grid2D::sum() const {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

namespace {

std::mutex g_fftw_mutex;  // fftw planning is not thread-safe

Grid2D conv2d_direct(const Grid2D& a, const Grid2D& b) {
    Grid2D out;
    out.lo_i = a.lo_i + b.lo_i;
    out.lo_j = a.lo_j + b.lo_j;
    out.ni = a.ni + b.ni - 1;
    out.nj = a.nj + b.nj - 1;
    out.v.assign(static_cast<std::size_t>(out.ni) * out.nj, 0.0);
    for (int ai = 0; ai < a.ni; ++ai)
        for (int aj = 0; aj < a.nj; ++aj) {
            double av = a.v[static_cast<std::size_t>(ai) * a.nj + aj];
            if (av == 0.0) continue;
            for (int bi = 0; bi < b.ni; ++bi) {
                double* dst = &out.v[static_cast<std::size_t>(ai + bi) * out.nj + aj];
                const double* src = &b.v[static_cast<std::size_t>(bi) * b.nj];
                for (int bj = 0; bj < b.nj; ++bj) dst[bj] += av * src[bj];
            }
        }
    return out;
}

Grid2D conv2d_fft_impl(const Grid2D& a, const Grid2D& b, ConvStats* stats,
                       bool clamp_renorm) {
    Grid2D out;
    out.lo_i = a.lo_i + b.lo_i;
    out.lo_j = a.lo_j + b.lo_j;
    out.ni = a.ni + b.ni - 1;
    out.nj = a.nj + b.nj - 1;
    int pi = out.ni, pj = out.nj;

    std::size_t total = static_cast<std::size_t>(pi) * pj;
    std::size_t cplx = static_cast<std::size_t>(pi) * (pj / 2 + 1);
    std::vector<double> pa(total, 0.0), pb(total, 0.0);
    for (int i = 0; i < a.ni; ++i)
        for (int j = 0; j < a.nj; ++j)
            pa[static_cast<std::size_t>(i) * pj + j] =
                a.v[static_cast<std::size_t>(i) * a.nj + j];
    for (int i = 0; i < b.ni; ++i)
        for (int j = 0; j < b.nj; ++j)
            pb[static_cast<std::size_t>(i) * pj + j] =
                b.v[static_cast<std::size_t>(i) * b.nj + j];

    std::vector<fftw_complex> fa(cplx), fb(cplx);
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_plan plan_a =
            fftw_plan_dft_r2c_2d(pi, pj, pa.data(), fa.data(), FFTW_ESTIMATE);
        fftw_execute(plan_a);
        fftw_destroy_plan(plan_a);
        fftw_plan plan_b =
            fftw_plan_dft_r2c_2d(pi, pj, pb.data(), fb.data(), FFTW_ESTIMATE);
        fftw_execute(plan_b);
        fftw_destroy_plan(plan_b);
    }
    for (std::size_t k = 0; k < cplx; ++k) {
        double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
        double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
        fa[k][0] = re;
        fa[k][1] = im;
    }
    std::vector<double> res(total);
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_plan plan_c =
            fftw_plan_dft_c2r_2d(pi, pj, fa.data(), res.data(), FFTW_ESTIMATE);
        fftw_execute(plan_c);
        fftw_destroy_plan(plan_c);
    }
    double scale = 1.0 / static_cast<double>(total);
    out.v.assign(total, 0.0);
    if (!clamp_renorm) {
        for (std::size_t k = 0; k < total; ++k) out.v[k] = res[k] * scale;
        if (stats) stats->used_fft = true;
        return out;
    }
    double clamped = 0.0, kept = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
        double x = res[k] * scale;
        if (x < 0.0) {
            clamped += -x;
            x = 0.0;
        }
        out.v[k] = x;
        kept += x;
    }
    // Probability kernels: renormalize to the exact input mass.
    double want = a.sum() * b.sum();
    if (kept > 0.0 && want > 0.0) {
        double f = want / kept;
        for (double& x : out.v) x *= f;
        if (stats) stats->clamped_mass += clamped + std::fabs(kept - want);
    }
    if (stats) stats->used_fft = true;
    return out;
}

Grid2D conv2d_fft_signed(const Grid2D& a, const Grid2D& b) {
    return conv2d_fft_impl(a, b, nullptr, false);
}

}  // namespace

Grid2D conv2d(const Grid2D& a, const Grid2D& b, std::size_t fft_threshold,
              ConvStats* stats) {
    std::size_t out_cells = static_cast<std::size_t>(a.ni + b.ni - 1) *
                            static_cast<std::size_t>(a.nj + b.nj - 1);
    std::size_t kernel = static_cast<std::size_t>(std::min(a.ni, b.ni)) *
                         static_cast<std::size_t>(std::min(a.nj, b.nj));
    if (fft_threshold == 0 || out_cells * kernel >= fft_threshold)
        return conv2d_fft_impl(a, b, stats, true);
    return conv2d_direct(a, b);
}

Grid2D correlate2d(const Grid2D& kernel, const Grid2D& f, long long out_lo_i,
                   long long out_lo_j, int out_ni, int out_nj,
                   std::size_t fft_threshold) {
    std::size_t cost = static_cast<std::size_t>(out_ni) * out_nj *
                       static_cast<std::size_t>(kernel.ni) * kernel.nj;
    Grid2D out;
    out.lo_i = out_lo_i;
    out.lo_j = out_lo_j;
    out.ni = out_ni;
    out.nj = out_nj;
    if (fft_threshold == 0 || cost >= fft_threshold) {
        // correlate(k, f) = conv(flip k, f); values may be signed here, so
        // route through the direct/FFT dispatch without clamping by flipping
        // and cropping the full convolution.
        Grid2D flip;
        flip.ni = kernel.ni;
        flip.nj = kernel.nj;
        flip.lo_i = -(kernel.lo_i + kernel.ni - 1);
        flip.lo_j = -(kernel.lo_j + kernel.nj - 1);
        flip.v.assign(kernel.v.size(), 0.0);
        for (int i = 0; i < kernel.ni; ++i)
            for (int j = 0; j < kernel.nj; ++j)
                flip.v[static_cast<std::size_t>(kernel.ni - 1 - i) * kernel.nj +
                       (kernel.nj - 1 - j)] =
                    kernel.v[static_cast<std::size_t>(i) * kernel.nj + j];
        Grid2D full = conv2d_fft_signed(flip, f);
        out.v.assign(static_cast<std::size_t>(out_ni) * out_nj, 0.0);
        for (int i = 0; i < out_ni; ++i)
            for (int j = 0; j < out_nj; ++j)
                out.cell(out_lo_i + i, out_lo_j + j) =
                    full.at(out_lo_i + i, out_lo_j + j);
        return out;
    }
    out.v.assign(static_cast<std::size_t>(out_ni) * out_nj, 0.0);
    for (int i = 0; i < out_ni; ++i)
        for (int j = 0; j < out_nj; ++j) {
            double acc = 0.0;
            for (int ki = 0; ki < kernel.ni; ++ki)
                for (int kj = 0; kj < kernel.nj; ++kj) {
                    double kv = kernel.v[static_cast<std::size_t>(ki) * kernel.nj + kj];
                    if (kv == 0.0) continue;
                    acc += kv * f.at(out_lo_i + i + kernel.lo_i + ki,
                                     out_lo_j + j + kernel.lo_j + kj);
                }
            out.v[static_cast<std::size_t>(i) * out_nj + j] = acc;
        }
    return out;
}

}  // namespace autfool
