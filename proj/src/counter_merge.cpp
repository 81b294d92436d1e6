#include "autfool/counter_merge.hpp"

#include <unordered_map>

#include "autfool/parallel.hpp"

namespace autfool {

namespace {

template <int DIM>
std::vector<std::array<long long, DIM>> entry_increments(
    const DrivestreamDistribution& d, const MergeBlock<DIM>& blk) {
    std::vector<std::array<long long, DIM>> out(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) {
        std::array<long long, DIM> acc{};
        const Drivestream& e = d.entry(j);
        for (int step = 0; step < e.h; ++step)
            for (int a = 0; a < DIM; ++a)
                acc[a] += blk.inc[a][e.t + step][e.sym_indices[step]];
        out[j] = acc;
    }
    return out;
}

}  // namespace

template <int DIM>
CounterMergeSource<DIM>::CounterMergeSource(const ProbabilitySpace& space,
                                            const DrivestreamDistribution& d1,
                                            const DrivestreamDistribution& d2,
                                            std::vector<MergeBlock<DIM>> blocks,
                                            int eta_total)
    : d1_(d1), d2_(d2), l1_(d1.depth()), l2_(d2.depth()), eta_(eta_total),
      blocks_(std::move(blocks)) {
    (void)space;
    if (d1_.t() + d1_.h() != d2_.t() || d1_.h() != d2_.h())
        throw ValidationError("merge windows must be adjacent with equal horizon");

    pfx1_.assign(d1_.size() + 1, 0.0);
    for (std::size_t j = 0; j < d1_.size(); ++j) pfx1_[j + 1] = pfx1_[j] + d1_.prob(j);
    pfx2_.assign(d2_.size() + 1, 0.0);
    for (std::size_t j = 0; j < d2_.size(); ++j) pfx2_[j + 1] = pfx2_[j] + d2_.prob(j);

    inc1_.reserve(blocks_.size());
    inc2_.reserve(blocks_.size());
    w_mid_.reserve(blocks_.size());
    for (auto& blk : blocks_) {
        block_row_begin_.push_back(total_rows_);
        total_rows_ += blk.rows.size();
        inc1_.push_back(entry_increments<DIM>(d1_, blk));
        inc2_.push_back(entry_increments<DIM>(d2_, blk));
    }
    row_ids_.resize(total_rows_);
    for (std::size_t r = 0; r < total_rows_; ++r) row_ids_[r] = static_cast<int>(r);

    // Midpoint boxes: rows shifted by any first-half increment; and the
    // marginalized weight w2 over those boxes.
    for (std::size_t g = 0; g < blocks_.size(); ++g) {
        const auto& blk = blocks_[g];
        LatticeBox<DIM> mid;
        if (blk.rows.empty()) {
            for (int a = 0; a < DIM; ++a) { mid.lo[a] = 0; mid.hi[a] = 0; }
            mid.alloc();
            w_mid_.push_back(std::move(mid));
            continue;
        }
        std::array<long long, DIM> rlo{}, rhi{};
        for (int a = 0; a < DIM; ++a) {
            rlo[a] = rhi[a] = blk.rows[0][a];
        }
        for (const auto& p : blk.rows)
            for (int a = 0; a < DIM; ++a) {
                rlo[a] = std::min(rlo[a], p[a]);
                rhi[a] = std::max(rhi[a], p[a]);
            }
        std::array<long long, DIM> ilo{}, ihi{};
        for (int a = 0; a < DIM; ++a) { ilo[a] = rhi[a]; ihi[a] = rlo[a]; }
        for (std::size_t j = 0; j < d1_.size(); ++j) {
            if (d1_.prob(j) == 0.0) continue;
            for (int a = 0; a < DIM; ++a) {
                ilo[a] = std::min(ilo[a], inc1_[g][j][a]);
                ihi[a] = std::max(ihi[a], inc1_[g][j][a]);
            }
        }
        for (int a = 0; a < DIM; ++a) {
            mid.lo[a] = rlo[a] + std::min(ilo[a], 0LL);
            mid.hi[a] = rhi[a] + std::max(ihi[a], 0LL);
        }
        mid.alloc();
        // w2(x) = sum_j p2_j * w_end(x + inc2_j)
        std::vector<std::array<long long, DIM>> pts;
        pts.reserve(mid.size());
        // iterate box points
        std::array<long long, DIM> p = mid.lo;
        for (;;) {
            pts.push_back(p);
            int a = DIM - 1;
            for (; a >= 0; --a) {
                if (++p[a] <= mid.hi[a]) break;
                p[a] = mid.lo[a];
            }
            if (a < 0) break;
        }
        parallel_for(static_cast<std::int64_t>(pts.size()),
                     [&](int, std::int64_t lo, std::int64_t hi) {
                         for (std::int64_t i = lo; i < hi; ++i) {
                             double acc = 0.0;
                             for (std::size_t j = 0; j < d2_.size(); ++j) {
                                 double pj = d2_.prob(j);
                                 if (pj == 0.0) continue;
                                 std::array<long long, DIM> q = pts[i];
                                 for (int a = 0; a < DIM; ++a) q[a] += inc2_[g][j][a];
                                 acc += pj * blk.w_end.at(q);
                             }
                             mid.v[mid.index(pts[i])] = acc;
                         }
                     });
        w_mid_.push_back(std::move(mid));
    }
}

template <int DIM>
void CounterMergeSource<DIM>::fill_columns(const std::vector<std::uint64_t>& prefixes,
                                           int level, double* slab, double* u_out) {
    const std::size_t rows = total_rows_;
    const std::size_t ncols = prefixes.size();

    if (level < l1_) {
        // Children split the D1 index range; D2 is marginalized into w2.
        int shift = l1_ - (level + 1);
        parallel_for(static_cast<std::int64_t>(ncols), [&](int, std::int64_t clo,
                                                           std::int64_t chi) {
            for (std::int64_t c = clo; c < chi; ++c) {
                std::uint64_t b0 = prefixes[c] << 1, b1 = b0 | 1;
                std::uint64_t lo0 = b0 << shift, hi0 = (b0 + 1) << shift;
                std::uint64_t lo1 = b1 << shift, hi1 = (b1 + 1) << shift;
                double p0 = range_prob1(lo0, hi0), p1 = range_prob1(lo1, hi1);
                u_out[c] = (p0 + p1) > 0.0 ? p1 / (p0 + p1) : 0.0;
                double* a = slab + static_cast<std::size_t>(c) * rows;
                for (std::size_t g = 0; g < blocks_.size(); ++g) {
                    const auto& blk = blocks_[g];
                    const auto& mid = w_mid_[g];
                    double* ag = a + block_row_begin_[g];
                    for (std::size_t r = 0; r < blk.rows.size(); ++r) {
                        double acc1 = 0.0, acc0 = 0.0;
                        for (std::uint64_t j = lo1; j < hi1; ++j) {
                            double pj = d1_.prob(j);
                            if (pj == 0.0) continue;
                            Point q = blk.rows[r];
                            for (int ax = 0; ax < DIM; ++ax) q[ax] += inc1_[g][j][ax];
                            acc1 += pj * mid.at(q);
                        }
                        for (std::uint64_t j = lo0; j < hi0; ++j) {
                            double pj = d1_.prob(j);
                            if (pj == 0.0) continue;
                            Point q = blk.rows[r];
                            for (int ax = 0; ax < DIM; ++ax) q[ax] += inc1_[g][j][ax];
                            acc0 += pj * mid.at(q);
                        }
                        double t1 = p1 > 0.0 ? acc1 / p1 : 0.0;
                        double t0 = p0 > 0.0 ? acc0 / p0 : 0.0;
                        ag[r] = t1 - t0;
                    }
                }
            }
        });
        return;
    }

    // D1 fully fixed: group columns that share the D2 prefix so each group
    // accumulates its child sums over the midpoint box once.
    int k = level - l1_;
    int shift = l2_ - (k + 1);
    std::unordered_map<std::uint64_t, int> group_of;
    std::vector<std::uint64_t> group_b2;
    std::vector<std::vector<std::uint64_t>> group_cols;
    for (std::size_t c = 0; c < ncols; ++c) {
        std::uint64_t b2 = prefixes[c] & ((k == 0) ? 0 : ((1ull << k) - 1));
        auto [it, fresh] = group_of.try_emplace(b2, static_cast<int>(group_b2.size()));
        if (fresh) {
            group_b2.push_back(b2);
            group_cols.emplace_back();
        }
        group_cols[it->second].push_back(c);
    }

    parallel_for(static_cast<std::int64_t>(group_b2.size()), [&](int, std::int64_t glo,
                                                                 std::int64_t ghi) {
        for (std::int64_t gi = glo; gi < ghi; ++gi) {
            std::uint64_t b2 = group_b2[gi];
            std::uint64_t c0 = b2 << 1, c1 = c0 | 1;
            std::uint64_t lo0 = c0 << shift, hi0 = (c0 + 1) << shift;
            std::uint64_t lo1 = c1 << shift, hi1 = (c1 + 1) << shift;
            double p0 = range_prob2(lo0, hi0), p1 = range_prob2(lo1, hi1);

            // Child accumulations g_x over each block's midpoint box.
            std::vector<std::vector<double>> acc0(blocks_.size()),
                acc1(blocks_.size());
            for (std::size_t g = 0; g < blocks_.size(); ++g) {
                const auto& blk = blocks_[g];
                const auto& mid = w_mid_[g];
                acc0[g].assign(mid.size(), 0.0);
                acc1[g].assign(mid.size(), 0.0);
                std::array<long long, DIM> p = mid.lo;
                for (std::size_t idx = 0;; ++idx) {
                    double s0 = 0.0, s1 = 0.0;
                    for (std::uint64_t j = lo0; j < hi0; ++j) {
                        double pj = d2_.prob(j);
                        if (pj == 0.0) continue;
                        Point q = p;
                        for (int ax = 0; ax < DIM; ++ax) q[ax] += inc2_[g][j][ax];
                        s0 += pj * blk.w_end.at(q);
                    }
                    for (std::uint64_t j = lo1; j < hi1; ++j) {
                        double pj = d2_.prob(j);
                        if (pj == 0.0) continue;
                        Point q = p;
                        for (int ax = 0; ax < DIM; ++ax) q[ax] += inc2_[g][j][ax];
                        s1 += pj * blk.w_end.at(q);
                    }
                    acc0[g][idx] = s0;
                    acc1[g][idx] = s1;
                    int a = DIM - 1;
                    for (; a >= 0; --a) {
                        if (++p[a] <= mid.hi[a]) break;
                        p[a] = mid.lo[a];
                    }
                    if (a < 0) break;
                }
            }

            for (std::uint64_t c : group_cols[gi]) {
                std::uint64_t j1 = prefixes[c] >> k;
                double pj1 = d1_.prob(j1);
                u_out[c] = (pj1 > 0.0 && (p0 + p1) > 0.0) ? p1 / (p0 + p1) : 0.0;
                double* a = slab + static_cast<std::size_t>(c) * rows;
                if (pj1 == 0.0) {
                    // Unreachable branch of E: conditionals are 0 by
                    // convention, so the whole column vanishes.
                    for (std::size_t r = 0; r < rows; ++r) a[r] = 0.0;
                    continue;
                }
                for (std::size_t g = 0; g < blocks_.size(); ++g) {
                    const auto& blk = blocks_[g];
                    const auto& mid = w_mid_[g];
                    double* ag = a + block_row_begin_[g];
                    for (std::size_t r = 0; r < blk.rows.size(); ++r) {
                        Point q = blk.rows[r];
                        for (int ax = 0; ax < DIM; ++ax) q[ax] += inc1_[g][j1][ax];
                        if (!mid.contains(q))
                            throw std::logic_error("midpoint box lookup out of range");
                        std::size_t idx = mid.index(q);
                        double t1 = p1 > 0.0 ? acc1[g][idx] / p1 : 0.0;
                        double t0 = p0 > 0.0 ? acc0[g][idx] / p0 : 0.0;
                        ag[r] = t1 - t0;
                    }
                }
            }
        }
    });
}

template <int DIM>
double CounterMergeSource<DIM>::index_prob(std::uint64_t index) const {
    std::uint64_t j1 = index >> l2_;
    std::uint64_t j2 = index & ((1ull << l2_) - 1);
    return d1_.prob(j1) * d2_.prob(j2);
}

template <int DIM>
std::uint64_t CounterMergeSource<DIM>::first_real_index() const {
    return (static_cast<std::uint64_t>(d1_.first_real()) << l2_) |
           static_cast<std::uint64_t>(d2_.first_real());
}

template <int DIM>
Drivestream CounterMergeSource<DIM>::materialize(std::uint64_t index) const {
    std::uint64_t j1 = index >> l2_;
    std::uint64_t j2 = index & ((1ull << l2_) - 1);
    const Drivestream& a = d1_.entry(j1);
    const Drivestream& b = d2_.entry(j2);
    Drivestream out;
    out.t = a.t;
    out.h = a.h + b.h;
    out.sym_indices = a.sym_indices;
    out.sym_indices.insert(out.sym_indices.end(), b.sym_indices.begin(),
                           b.sym_indices.end());
    return out;
}

template class CounterMergeSource<1>;
template class CounterMergeSource<2>;

}  // namespace autfool
