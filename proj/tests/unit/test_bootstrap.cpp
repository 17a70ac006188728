#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mfa/bootstrap.hpp"
#include "mfa/error.hpp"
#include "mfa/synth.hpp"

using namespace mfa;

namespace {

CoefficientPyramid flat_pyramid(std::size_t leaves, int nlev, double H) {
    std::vector<PyramidLevel> levels;
    for (int j = 1; j <= nlev; ++j) {
        PyramidLevel lv;
        lv.j = j;
        lv.rows = 1;
        lv.cols = leaves >> (j - 1);
        std::vector<double> v(lv.cols);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = (k % 2 ? -1.0 : 1.0) * std::pow(2.0, H * j);
        lv.bands = {v};
        lv.valid.assign(lv.cols, 1);
        levels.push_back(lv);
    }
    return CoefficientPyramid(1, Boundary::periodic, 2, levels);
}

AnalysisBundle leader_bundle(int j1, int j2) {
    AnalysisBundle b;
    b.source = Source::leaders;
    b.p_grid = {-2.0, 0.0, 1.0, 2.0, 4.0};
    b.cumulant_order = 2;
    b.regression.j1 = j1;
    b.regression.j2 = j2;
    return b;
}

}  // namespace

TEST_CASE("percentile interval interpolates order statistics") {
    std::vector<double> x(100);
    std::iota(x.begin(), x.end(), 1.0);
    const auto ci = percentile_interval(x, 0.9);
    CHECK(ci.lo == doctest::Approx(5.95).epsilon(1e-12));
    CHECK(ci.hi == doctest::Approx(95.05).epsilon(1e-12));
    CHECK(ci.resamples == 100);
}

TEST_CASE("zero-variance pyramid gives zero-width intervals") {
    const auto pyr = flat_pyramid(1024, 8, 0.6);
    BootstrapConfig cfg;
    cfg.B = 59;
    cfg.seed = 3;
    const auto est = bootstrap_ci(pyr, leader_bundle(1, 6), cfg);
    for (std::size_t i = 0; i < est.p_grid.size(); ++i) {
        REQUIRE(est.value_ci[i]);
        CHECK(est.value_ci[i]->hi - est.value_ci[i]->lo == 0.0);
        CHECK(est.values[i] == doctest::Approx(0.6 * est.p_grid[i]).epsilon(1e-12).scale(1.0));
    }
    for (const auto& ci : est.cumulant_ci) {
        REQUIRE(ci);
        CHECK(ci->hi - ci->lo == 0.0);
    }
    REQUIRE(est.h_min);
    REQUIRE(est.h_min->ci);
    CHECK(est.h_min->ci->hi - est.h_min->ci->lo == 0.0);
}

TEST_CASE("intervals are ordered, reproducible and hold the point estimate") {
    const auto x = synth_fbm(0.7, 1 << 13, 1, 11);
    const auto pyr = dwt_forward(x, design_daubechies_filter(2), 9);
    BootstrapConfig cfg;
    cfg.B = 99;
    cfg.seed = 5;
    const auto a = bootstrap_ci(pyr, leader_bundle(3, 8), cfg);
    const auto b = bootstrap_ci(pyr, leader_bundle(3, 8), cfg);
    for (std::size_t i = 0; i < a.p_grid.size(); ++i) {
        CHECK(a.value_ci[i]->lo <= a.value_ci[i]->hi);
        CHECK(a.value_ci[i]->lo == b.value_ci[i]->lo);
        CHECK(a.value_ci[i]->hi == b.value_ci[i]->hi);
        CHECK(a.value_ci[i]->level == 0.9);
        CHECK(a.value_ci[i]->resamples == 99);
    }
    CHECK(a.cumulant_ci[0]->lo <= a.cumulants[0]);
    CHECK(a.cumulants[0] <= a.cumulant_ci[0]->hi);
    CHECK(a.value_ci[1]->lo == 0.0);
    CHECK(a.value_ci[1]->hi == 0.0);
    cfg.seed = 6;
    const auto c = bootstrap_ci(pyr, leader_bundle(3, 8), cfg);
    CHECK(c.cumulant_ci[0]->lo != a.cumulant_ci[0]->lo);
}

TEST_CASE("coefficient source and leader-only input") {
    const auto x = synth_fbm(0.5, 1 << 12, 1, 12);
    const auto pyr = dwt_forward(x, design_daubechies_filter(2), 8);
    AnalysisBundle b;
    b.source = Source::coefficients;
    b.p_grid = {1.0, 2.0};
    b.regression = {2, 7};
    BootstrapConfig cfg;
    cfg.B = 39;
    const auto e = bootstrap_ci(pyr, b, cfg);
    CHECK(e.value_ci[1]->lo <= e.values[1] + 0.05);
    CHECK(e.value_ci[1]->hi >= e.values[1] - 0.05);
    const auto lead = compute_leaders(pyr);
    const auto f = bootstrap_ci(lead, leader_bundle(2, 7), cfg);
    CHECK(f.h_min->ci);
    CHECK_THROWS_AS(bootstrap_ci(lead, b, cfg), Error);
}

TEST_CASE("configuration errors") {
    const auto pyr = flat_pyramid(256, 6, 0.5);
    BootstrapConfig cfg;
    cfg.B = 38;
    CHECK_THROWS_AS(bootstrap_ci(pyr, leader_bundle(1, 5), cfg), Error);
    cfg.B = 39;
    cfg.block_length = 200;
    try {
        bootstrap_ci(pyr, leader_bundle(1, 5), cfg);
        FAIL("expected insufficient data");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::insufficient_data);
    }
    cfg.block_length = 4;
    cfg.ci_level = 1.0;
    CHECK_THROWS_AS(bootstrap_ci(pyr, leader_bundle(1, 5), cfg), Error);
}

TEST_CASE("c1 interval covers H for most fBm paths") {
    int covered = 0, holds_estimate = 0, checked = 0;
    const int runs = 20;
    for (int r = 0; r < runs; ++r) {
        const auto x = synth_fbm(0.7, 1 << 13, 1, 77, static_cast<std::uint64_t>(r));
        const auto pyr = dwt_forward(x, design_daubechies_filter(3), 10);
        BootstrapConfig cfg;
        cfg.B = 99;
        cfg.seed = static_cast<std::uint64_t>(r);
        const auto e = bootstrap_ci(pyr, leader_bundle(4, 9), cfg);
        if (e.cumulant_ci[0]->lo <= 0.7 && 0.7 <= e.cumulant_ci[0]->hi) ++covered;
        for (std::size_t i = 0; i < e.p_grid.size(); ++i, ++checked)
            if (e.value_ci[i]->lo <= e.values[i] && e.values[i] <= e.value_ci[i]->hi) ++holds_estimate;
        for (std::size_t m = 0; m < e.cumulants.size(); ++m, ++checked)
            if (e.cumulant_ci[m]->lo <= e.cumulants[m] && e.cumulants[m] <= e.cumulant_ci[m]->hi) ++holds_estimate;
    }
    MESSAGE("covered " << covered << " of " << runs << ", estimate inside " << holds_estimate << " of " << checked);
    CHECK(covered >= 14);
    CHECK(holds_estimate >= 0.95 * checked);
}
