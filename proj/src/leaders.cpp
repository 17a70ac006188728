#include "mfa/leaders.hpp"

#include <algorithm>
#include <cmath>

#include "mfa/error.hpp"
#include "mfa/regression.hpp"

namespace mfa {

namespace {

struct SupLevel {
    std::vector<double> sup;
    std::vector<std::uint8_t> clean;  // no masked atom in the cube or below
};

std::vector<SupLevel> build_suprema(const CoefficientPyramid& pyramid) {
    std::vector<SupLevel> out;
    out.reserve(static_cast<std::size_t>(pyramid.num_levels()));
    for (const PyramidLevel& lv : pyramid.levels()) {
        SupLevel s;
        s.sup.assign(lv.size(), 0.0);
        s.clean.assign(lv.size(), 1);
        for (const auto& band : lv.bands)
            for (std::size_t i = 0; i < lv.size(); ++i) s.sup[i] = std::max(s.sup[i], std::abs(band[i]));
        for (std::size_t i = 0; i < lv.size(); ++i) s.clean[i] = lv.valid[i];

        if (!out.empty()) {
            const SupLevel& fine = out.back();
            const PyramidLevel& flv = pyramid.level(lv.j - 1);
            for (std::size_t r = 0; r < lv.rows; ++r) {
                for (std::size_t c = 0; c < lv.cols; ++c) {
                    const std::size_t i = r * lv.cols + c;
                    const std::size_t rr0 = pyramid.dim() == 1 ? 0 : 2 * r;
                    const std::size_t rr1 = pyramid.dim() == 1 ? 0 : 2 * r + 1;
                    for (std::size_t rr = rr0; rr <= rr1; ++rr) {
                        for (std::size_t cc = 2 * c; cc <= 2 * c + 1; ++cc) {
                            const std::size_t f = rr * flv.cols + cc;
                            s.sup[i] = std::max(s.sup[i], fine.sup[f]);
                            if (!fine.clean[f]) s.clean[i] = 0;
                        }
                    }
                }
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

std::size_t LeaderLevel::valid_count() const {
    return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

LeaderPyramid::LeaderPyramid(int dim, Boundary boundary, double integration_order,
                             std::vector<LeaderLevel> levels)
    : dim_(dim), boundary_(boundary), integration_order_(integration_order), levels_(std::move(levels)) {}

const LeaderLevel& LeaderPyramid::level(int j) const {
    require(j >= 1 && j <= num_levels(), ErrorKind::invalid_argument,
            "leader level " + std::to_string(j) + " outside 1.." + std::to_string(num_levels()));
    return levels_[static_cast<std::size_t>(j - 1)];
}

std::vector<std::vector<double>> cube_suprema(const CoefficientPyramid& pyramid) {
    std::vector<std::vector<double>> out;
    for (auto& s : build_suprema(pyramid)) out.push_back(std::move(s.sup));
    return out;
}

LeaderPyramid compute_leaders(const CoefficientPyramid& pyramid) {
    require(pyramid.num_levels() >= 2, ErrorKind::invalid_argument,
            "leaders need a pyramid with at least two levels");
    const auto sup = build_suprema(pyramid);
    const bool periodic = pyramid.boundary() == Boundary::periodic;
    const bool two_d = pyramid.dim() == 2;

    std::vector<LeaderLevel> levels;
    for (const PyramidLevel& lv : pyramid.levels()) {
        const SupLevel& s = sup[static_cast<std::size_t>(lv.j - 1)];
        LeaderLevel out;
        out.j = lv.j;
        out.rows = lv.rows;
        out.cols = lv.cols;
        out.values.assign(lv.size(), 0.0);
        out.valid.assign(lv.size(), 1);
        const long rows = static_cast<long>(lv.rows), cols = static_cast<long>(lv.cols);
        const long dr = two_d ? 1 : 0;
        for (long r = 0; r < rows; ++r) {
            for (long c = 0; c < cols; ++c) {
                double d = 0.0;
                bool ok = true;
                for (long a = r - dr; a <= r + dr; ++a) {
                    for (long b = c - 1; b <= c + 1; ++b) {
                        long ra = a, cb = b;
                        if (periodic) {
                            ra = (a + rows) % rows;
                            cb = (b + cols) % cols;
                        } else if (a < 0 || a >= rows || b < 0 || b >= cols) {
                            ok = false;
                            continue;
                        }
                        const std::size_t i = static_cast<std::size_t>(ra * cols + cb);
                        d = std::max(d, s.sup[i]);
                        if (!s.clean[i]) ok = false;
                    }
                }
                const std::size_t i = static_cast<std::size_t>(r * cols + c);
                out.values[i] = d;
                out.valid[i] = ok ? 1 : 0;
            }
        }
        levels.push_back(std::move(out));
    }
    return LeaderPyramid(pyramid.dim(), pyramid.boundary(), pyramid.integration_order(),
                         std::move(levels));
}

PointwiseEstimate pointwise_holder_estimate(const LeaderPyramid& leaders,
                                            std::span<const double> x0, int j1, int j2) {
    require(x0.size() == static_cast<std::size_t>(leaders.dim()), ErrorKind::invalid_argument,
            "position dimension does not match the leaders");
    for (double v : x0)
        require(v >= 0.0 && v < 1.0, ErrorKind::invalid_argument, "position outside [0,1)");
    require(j1 >= 1 && j2 <= leaders.num_levels() && j2 - j1 >= 1, ErrorKind::invalid_argument,
            "scale range outside the available levels");

    std::vector<double> js, logs, w;
    for (int j = j1; j <= j2; ++j) {
        const LeaderLevel& lv = leaders.level(j);
        const std::size_t c = std::min(lv.cols - 1, static_cast<std::size_t>(x0.back() * lv.cols));
        const std::size_t r =
            leaders.dim() == 1 ? 0 : std::min(lv.rows - 1, static_cast<std::size_t>(x0[0] * lv.rows));
        const double d = lv.values[r * lv.cols + c];
        if (!(d > 0.0))
            fail(ErrorKind::degenerate_leader,
                 "zero leader at octave " + std::to_string(j) + " around the requested position");
        js.push_back(j);
        logs.push_back(std::log2(d));
        w.push_back(1.0);
    }
    const LineFit fit = weighted_line_fit(js, logs, w);
    return {fit.slope, fit.intercept};
}

}  // namespace mfa
