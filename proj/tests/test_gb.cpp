#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "autfool/gale_berlekamp.hpp"
#include "test_helpers.hpp"

using namespace autfool;
using namespace autfool::testing;

namespace {

GBInstance random_pm1(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    GBInstance inst;
    inst.n = n;
    inst.a.assign(n, std::vector<int>(n));
    for (auto& row : inst.a)
        for (auto& x : row) x = rng.next() & 1 ? 1 : -1;
    return inst;
}

// Exact optimum by enumerating y and applying the sign rule for x.
long long brute_force_gb(const GBInstance& inst) {
    long long best = -1;
    for (std::uint64_t mask = 0; mask < (1ull << inst.n); ++mask) {
        long long total = 0;
        for (int i = 0; i < inst.n; ++i) {
            long long row = 0;
            for (int j = 0; j < inst.n; ++j)
                row += inst.a[i][j] * ((mask >> j) & 1 ? 1 : -1);
            total += std::llabs(row);
        }
        best = std::max(best, total);
    }
    return best;
}

}  // namespace

TEST_CASE("imbalance identities") {
    GBInstance inst;
    inst.n = 2;
    inst.a = {{1, -1}, {-1, 1}};
    CHECK(imbalance(inst, {1, -1}, {1, -1}) == 4);
    CHECK(imbalance(inst, {1, 1}, {1, 1}) == 0);

    GBInstance r = random_pm1(6, 17);
    SplitMix64 rng(18);
    std::vector<int> x(6), y(6);
    for (auto& v : x) v = rng.next() & 1 ? 1 : -1;
    for (auto& v : y) v = rng.next() & 1 ? 1 : -1;
    long long direct = imbalance(r, x, y);
    long long rowsum = 0;
    for (int i = 0; i < 6; ++i) {
        long long row = 0;
        for (int j = 0; j < 6; ++j) row += r.a[i][j] * y[j];
        rowsum += x[i] * row;
    }
    CHECK(direct == rowsum);
}

TEST_CASE("expected |S_n| oracle") {
    CHECK(gb_expected_weight_oracle(1) == doctest::Approx(1.0));
    CHECK(gb_expected_weight_oracle(2) == doctest::Approx(1.0));
    CHECK(gb_expected_weight_oracle(4) == doctest::Approx(1.5));
    // Exact sum and the closed form agree across the switchover.
    for (int n : {16, 29, 30, 31, 40, 64}) {
        double c = gb_expected_weight_oracle(n);
        if (n <= 30) {
            double direct = 0.0;
            for (int k = 0; k <= n; ++k) {
                double logp = std::lgamma(n + 1) - std::lgamma(k + 1) -
                              std::lgamma(n - k + 1) - n * std::log(2.0);
                direct += std::exp(logp) * std::fabs(2.0 * k - n);
            }
            CHECK(c == doctest::Approx(direct).epsilon(1e-10));
        }
        // Anti-concentration sanity: within 5% of sqrt(2n/pi) for n >= 16.
        double target = std::sqrt(2.0 * n / 3.14159265358979323846);
        CHECK(std::fabs(c - target) / target <= 0.05);
    }
}

TEST_CASE("n = 1 instance is solved exactly") {
    GBInstance inst;
    inst.n = 1;
    inst.a = {{1}};
    GBConfig cfg;
    GBResult r = run_gb(inst, cfg);
    CHECK(r.imbalance == 1);
    CHECK(r.x.size() == 1);
    CHECK(r.y.size() == 1);
}

TEST_CASE("n = 2 identity matrix reaches the optimum 2") {
    GBInstance inst;
    inst.n = 2;
    inst.a = {{1, -1}, {-1, 1}};
    // brute optimum for this matrix is 4
    GBConfig cfg;
    cfg.size_cap = 256;
    GBResult r = run_gb(inst, cfg);
    CHECK(r.imbalance <= brute_force_gb(inst));
    CHECK(r.imbalance >= r.certified_bound - 1e-9);

    GBInstance eye;
    eye.n = 2;
    eye.a = {{1, 1}, {1, -1}};  // Hadamard-like, optimum 2*sqrt(2)-ish integer 4
    GBResult r2 = run_gb(eye, cfg);
    CHECK(r2.imbalance <= brute_force_gb(eye));
}

TEST_CASE("n = 8 random matrices: sandwich between certificate and optimum") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        GBInstance inst = random_pm1(8, 100 + seed);
        GBConfig cfg;
        cfg.size_cap = 512;
        GBResult r = run_gb(inst, cfg);
        long long opt = brute_force_gb(inst);
        CHECK(r.imbalance <= opt);
        CHECK(static_cast<double>(r.imbalance) >= r.certified_bound - 1e-9);
        // The sign rule ties x to y exactly.
        long long rowsum = 0;
        for (int i = 0; i < 8; ++i) {
            long long row = 0;
            for (int j = 0; j < 8; ++j) row += inst.a[i][j] * r.y[j];
            rowsum += std::llabs(row);
        }
        CHECK(r.imbalance == rowsum);
    }
}

TEST_CASE("certified bound is positive at n = 16 with desk constants") {
    GBInstance inst = random_pm1(16, 901);
    GBConfig cfg;
    cfg.size_cap = 1024;
    cfg.epsilon_scale = 0.35;  // nominal 1/sqrt(n log n) only certifies huge n
    GBResult r = run_gb(inst, cfg);
    CHECK(r.certified_bound > 0.0);
    CHECK(static_cast<double>(r.imbalance) >= r.certified_bound - 1e-9);
    CHECK(r.expected_row_weight ==
          doctest::Approx(gb_expected_weight_oracle(16)).epsilon(1e-9));
}

TEST_CASE("gb validation") {
    GBInstance bad;
    bad.n = 2;
    bad.a = {{1, 0}, {1, 1}};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}
