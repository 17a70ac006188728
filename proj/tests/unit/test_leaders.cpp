#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mfa/error.hpp"
#include "mfa/leaders.hpp"
#include "oracles/exhaustive_leaders.hpp"

using namespace mfa;

namespace {

CoefficientPyramid make_pyramid(const std::vector<std::vector<double>>& coeffs, Boundary b,
                                const std::vector<std::vector<std::uint8_t>>& masks = {}) {
    std::vector<PyramidLevel> levels;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        PyramidLevel lv;
        lv.j = static_cast<int>(i) + 1;
        lv.rows = 1;
        lv.cols = coeffs[i].size();
        lv.bands = {coeffs[i]};
        lv.valid = masks.empty() ? std::vector<std::uint8_t>(lv.cols, 1) : masks[i];
        levels.push_back(lv);
    }
    return CoefficientPyramid(1, b, 1, levels);
}

CoefficientPyramid random_pyramid(std::size_t leaves, int nlev, unsigned seed, Boundary b,
                                  double mask_rate) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    std::bernoulli_distribution masked(mask_rate);
    std::vector<std::vector<double>> c;
    std::vector<std::vector<std::uint8_t>> m;
    for (int j = 1; j <= nlev; ++j) {
        const std::size_t n = leaves >> (j - 1);
        std::vector<double> v(n);
        std::vector<std::uint8_t> ok(n);
        for (std::size_t k = 0; k < n; ++k) {
            v[k] = N(rng) * std::pow(2.0, 0.3 * j);
            ok[k] = masked(rng) ? 0 : 1;
        }
        c.push_back(v);
        m.push_back(ok);
    }
    return make_pyramid(c, b, m);
}

void compare_with_oracle(const CoefficientPyramid& p) {
    const auto got = compute_leaders(p);
    const auto ref = oracle::exhaustive_leaders(p);
    for (int j = 1; j <= p.num_levels(); ++j) {
        const auto& lv = got.level(j);
        for (std::size_t k = 0; k < lv.cols; ++k) {
            CHECK(lv.values[k] == ref[j - 1][k].value);
            CHECK((lv.valid[k] != 0) == ref[j - 1][k].valid);
        }
    }
}

}  // namespace

TEST_CASE("all-zero pyramid gives zero leaders") {
    const auto p = make_pyramid({std::vector<double>(16, 0.0), std::vector<double>(8, 0.0),
                                 std::vector<double>(4, 0.0)},
                                Boundary::periodic);
    const auto l = compute_leaders(p);
    for (const auto& lv : l.levels())
        for (double d : lv.values) CHECK(d == 0.0);
}

TEST_CASE("toy pyramid: a fine atom reaches the coarse leader") {
    const auto p = make_pyramid({{1.0, 0.0, 0.0, 0.0}, {0.0, 0.0}}, Boundary::periodic);
    const auto l = compute_leaders(p);
    CHECK(l.level(2).values[0] == 1.0);
    CHECK(l.level(1).values[0] == 1.0);
    CHECK(l.level(1).values[1] == 1.0);
    CHECK(l.level(1).values[2] == 0.0);
    CHECK(l.level(1).values[3] == 1.0);
    compare_with_oracle(p);
}

TEST_CASE("recursive leaders equal exhaustive enumeration") {
    for (unsigned seed = 0; seed < 60; ++seed) {
        const std::size_t leaves = seed % 3 == 0 ? 16 : (seed % 3 == 1 ? 32 : 64);
        const int nlev = seed % 3 == 0 ? 4 : (seed % 3 == 1 ? 5 : 6);
        compare_with_oracle(random_pyramid(leaves, nlev, seed, Boundary::periodic, 0.0));
        compare_with_oracle(random_pyramid(leaves, nlev, seed, Boundary::discard, 0.05));
    }
}

TEST_CASE("nesting monotonicity and sign invariance") {
    const auto p = random_pyramid(64, 6, 7, Boundary::periodic, 0.0);
    const auto l = compute_leaders(p);
    for (int j = 2; j <= l.num_levels(); ++j) {
        const auto& lv = l.level(j);
        const auto& fine = l.level(j - 1);
        for (std::size_t k = 0; k < lv.cols; ++k)
            CHECK(lv.values[k] >= std::max(fine.values[2 * k], fine.values[2 * k + 1]));
    }
    std::vector<std::vector<double>> flipped;
    for (const auto& lv : p.levels()) {
        auto v = lv.bands[0];
        for (std::size_t k = 0; k < v.size(); k += 2) v[k] = -v[k];
        flipped.push_back(v);
    }
    const auto lf = compute_leaders(make_pyramid(flipped, Boundary::periodic));
    for (int j = 1; j <= l.num_levels(); ++j) CHECK(lf.level(j).values == l.level(j).values);
}

TEST_CASE("2D leaders pool bands and nine neighbours") {
    std::vector<PyramidLevel> levels;
    for (int j = 1; j <= 3; ++j) {
        PyramidLevel lv;
        lv.j = j;
        lv.rows = lv.cols = std::size_t{16} >> j;
        lv.bands.assign(3, std::vector<double>(lv.size(), 0.0));
        lv.valid.assign(lv.size(), 1);
        levels.push_back(lv);
    }
    levels[0].bands[2][3 * 8 + 5] = -2.0;  // octave 1, cell (3,5)
    levels[2].bands[1][0] = 1.0;           // octave 3, cell (0,0)
    const CoefficientPyramid p(2, Boundary::discard, 1, levels);
    const auto l = compute_leaders(p);
    // Octave-2 cube (1,2) contains (3,5); its neighbours (0..2, 1..3) see it.
    const auto& l2 = l.level(2);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            const bool near = r <= 2 && c >= 1 && c <= 3;
            CHECK(l2.values[r * 4 + c] == (near ? 2.0 : 0.0));
            CHECK((l2.valid[r * 4 + c] != 0) == (r >= 1 && r <= 2 && c >= 1 && c <= 2));
        }
    CHECK(l.level(3).values[0] == 2.0);
}

TEST_CASE("pointwise estimate on an exact power law") {
    std::vector<std::vector<double>> c;
    for (int j = 1; j <= 8; ++j) c.push_back(std::vector<double>(std::size_t{512} >> j, std::pow(2.0, 0.7 * j)));
    const auto l = compute_leaders(make_pyramid(c, Boundary::periodic));
    const double x0[] = {0.37};
    CHECK(std::abs(pointwise_holder_estimate(l, x0, 2, 8).h - 0.7) < 1e-12);

    std::vector<std::vector<double>> z;
    for (int j = 1; j <= 4; ++j) z.push_back(std::vector<double>(std::size_t{64} >> j, 0.0));
    const auto lz = compute_leaders(make_pyramid(z, Boundary::periodic));
    CHECK_THROWS_AS(pointwise_holder_estimate(lz, x0, 1, 4), Error);
}

TEST_CASE("cusp exponent from sampled data") {
    const std::size_t n = std::size_t{1} << 14;
    std::vector<double> x(n);
    const double x0 = 0.4;
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sqrt(std::abs(static_cast<double>(i) / n - x0));
    const auto f = design_daubechies_filter(3);
    const auto p = dwt_forward(Signal::line(x), f, 10, Boundary::discard);
    const auto l = compute_leaders(p);
    const double pos[] = {x0};
    const double h = pointwise_holder_estimate(l, pos, 3, 10).h;
    CHECK(std::abs(h - 0.5) < 0.1);
}

TEST_CASE("single-level pyramid is rejected") {
    const auto p = make_pyramid({{1.0, 2.0}}, Boundary::periodic);
    CHECK_THROWS_AS(compute_leaders(p), Error);
}
