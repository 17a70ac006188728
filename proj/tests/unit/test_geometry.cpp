#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfa/error.hpp"
#include "mfa/geometry.hpp"
#include "mfa/synth.hpp"

using namespace mfa;

namespace {

RegressionConfig range(int j1, int j2, Weighting w = Weighting::uniform) {
    RegressionConfig c;
    c.j1 = j1;
    c.j2 = j2;
    c.weighting = w;
    return c;
}

}  // namespace

TEST_CASE("full grid has dimension two at every scale") {
    BinaryGrid g = BinaryGrid::empty(8);
    std::fill(g.cells.begin(), g.cells.end(), 1);
    const auto counts = box_counts(g);
    for (std::size_t j = 0; j < counts.size(); ++j) CHECK(counts[j] == (std::size_t{1} << (2 * (8 - j))));
    CHECK(box_dimension(g, range(0, 6)).dimension == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("horizontal line has dimension one") {
    BinaryGrid g = BinaryGrid::empty(9);
    for (std::size_t c = 0; c < g.side(); ++c) g.set(100, c);
    CHECK(box_dimension(g, range(0, 7)).dimension == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(box_dimension(g, range(1, 6, Weighting::count)).dimension == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate grids are rejected") {
    BinaryGrid g = BinaryGrid::empty(6);
    CHECK_THROWS_AS(box_dimension(g, range(0, 4)), Error);
    g.set(3, 3);
    try {
        box_dimension(g, range(0, 4));
        FAIL("expected insufficient data");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::insufficient_data);
    }
    g.set(3, 2);
    // Two cells merge into one box after a single halving.
    CHECK_THROWS_AS(box_dimension(g, range(0, 4)), Error);
}

TEST_CASE("box counts shrink by at most 2^d per octave") {
    const auto g = rasterize_von_koch(5, 9, KochFill::boundary);
    const auto counts = box_counts(g);
    for (std::size_t j = 1; j < counts.size(); ++j) {
        CHECK(counts[j] <= counts[j - 1]);
        CHECK(counts[j - 1] <= 4 * counts[j]);
    }
}

TEST_CASE("snowflake polyline has 3 * 4^d segments") {
    for (int d = 0; d <= 5; ++d) CHECK(von_koch_polyline(d, 10).size() == 3 * static_cast<std::size_t>(std::pow(4, d)));
}

TEST_CASE("depth too deep for the raster") {
    CHECK_NOTHROW(rasterize_von_koch(6, 8, KochFill::boundary));
    try {
        rasterize_von_koch(7, 8, KochFill::boundary);
        FAIL("expected invalid argument");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_argument);
    }
}

TEST_CASE("triangle outline grows linearly with resolution") {
    std::vector<double> occ;
    for (int n = 6; n <= 11; ++n) occ.push_back(static_cast<double>(rasterize_von_koch(0, n, KochFill::boundary).occupied()));
    for (std::size_t i = 1; i < occ.size(); ++i) CHECK(occ[i] / occ[i - 1] == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("filled snowflake contains its boundary and is connected inside") {
    const auto b = rasterize_von_koch(4, 9, KochFill::boundary);
    const auto f = rasterize_von_koch(4, 9, KochFill::filled);
    for (std::size_t i = 0; i < b.cells.size(); ++i)
        if (b.cells[i]) CHECK(f.cells[i]);
    CHECK(f.at(f.side() / 2, f.side() / 2));
    CHECK(!f.at(0, 0));
    CHECK(f.occupied() > 3 * b.occupied());
}

TEST_CASE("snowflake boundary box dimension") {
    const auto g = rasterize_von_koch(7, 10, KochFill::boundary);
    const double D = box_dimension(g, range(1, 8, Weighting::count)).dimension;
    CHECK(std::abs(D - std::log(4.0) / std::log(3.0)) < 0.05);
}

TEST_CASE("ramp has graph dimension one") {
    std::vector<double> x(4096);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = static_cast<double>(k) / 4096.0;
    const auto gd = graph_dimension_from_oscillation(Signal::line(x), range(2, 9));
    CHECK(gd.O1 == doctest::Approx(1.0).epsilon(0.02));
    CHECK(gd.oscillation_based == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!gd.degenerate);
}

TEST_CASE("constant signal is flagged") {
    const auto gd = graph_dimension_from_oscillation(Signal::line(std::vector<double>(512, 3.0)), range(1, 5));
    CHECK(gd.degenerate);
    CHECK(gd.oscillation_based == 1.0);
    CHECK(gd.leader_based == 1.0);
}

TEST_CASE("oscillation over a cube bounds oscillation over its children") {
    const auto x = synth_fbm(0.4, 2048, 1, 17);
    const auto atoms = oscillation_atoms(x, 6);
    for (std::size_t l = 1; l < atoms.size(); ++l) {
        const auto& fine = atoms[l - 1].values;
        const auto& coarse = atoms[l].values;
        for (std::size_t k = 0; k < coarse.size(); ++k) {
            CHECK(coarse[k] >= 0.0);
            CHECK(coarse[k] >= fine[2 * k]);
            CHECK(coarse[k] >= fine[2 * k + 1]);
        }
    }
}

TEST_CASE("fBm graph dimension") {
    double osc = 0.0, lead = 0.0;
    const int reps = 10;
    for (int r = 0; r < reps; ++r) {
        const auto x = synth_fbm(0.7, 1 << 14, 1, 2024, static_cast<std::uint64_t>(r));
        const auto gd = graph_dimension_from_oscillation(x, range(3, 10, Weighting::count));
        osc += gd.oscillation_based / reps;
        lead += gd.leader_based / reps;
    }
    CHECK(std::abs(osc - 1.3) < 0.05);
    CHECK(std::abs(lead - osc) < 0.1);
}

TEST_CASE("Weierstrass graph dimension") {
    // The mean oscillation approaches its power law slowly, so fine octaves are left out.
    const auto x = synth_weierstrass(2.0, 0.5, 1 << 16);
    const auto gd = graph_dimension_from_oscillation(x, range(4, 12));
    CHECK(std::abs(gd.oscillation_based - 1.5) < 0.05);
    CHECK(std::abs(gd.leader_based - gd.oscillation_based) < 0.1);
}
