#include "mfa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfa/dwt.hpp"
#include "mfa/error.hpp"
#include "mfa/leaders.hpp"
#include "mfa/regression.hpp"

namespace mfa {

BinaryGrid BinaryGrid::empty(int resolution) {
    require(resolution >= 1 && resolution <= 14, ErrorKind::invalid_argument,
            "grid resolution must lie in [1, 14]");
    BinaryGrid g;
    g.resolution = resolution;
    g.cells.assign(g.side() * g.side(), 0);
    return g;
}

std::size_t BinaryGrid::occupied() const {
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

Signal BinaryGrid::to_signal() const {
    std::vector<double> v(cells.begin(), cells.end());
    return Signal::image(side(), side(), std::move(v), 1.0 / static_cast<double>(side()));
}

std::vector<std::size_t> box_counts(const BinaryGrid& grid) {
    std::vector<std::size_t> counts;
    std::vector<std::uint8_t> cur = grid.cells;
    std::size_t side = grid.side();
    counts.push_back(static_cast<std::size_t>(std::count(cur.begin(), cur.end(), std::uint8_t{1})));
    while (side > 1) {
        const std::size_t half = side / 2;
        std::vector<std::uint8_t> next(half * half, 0);
        for (std::size_t r = 0; r < side; ++r)
            for (std::size_t c = 0; c < side; ++c)
                if (cur[r * side + c]) next[(r / 2) * half + c / 2] = 1;
        cur = std::move(next);
        side = half;
        counts.push_back(static_cast<std::size_t>(std::count(cur.begin(), cur.end(), std::uint8_t{1})));
    }
    return counts;
}

BoxCounting box_dimension(const BinaryGrid& grid, const RegressionConfig& config) {
    require(grid.cells.size() == grid.side() * grid.side(), ErrorKind::invalid_argument,
            "grid storage does not match its resolution");
    const std::size_t occ = grid.occupied();
    require(occ >= 2, ErrorKind::insufficient_data, "box counting needs at least two occupied cells");
    require(config.j1 >= 0 && config.j1 < config.j2 && config.j2 <= grid.resolution,
            ErrorKind::invalid_argument, "box scale range outside 0..resolution");
    const auto counts = box_counts(grid);
    BoxCounting out;
    std::vector<double> x, y, w;
    for (int j = config.j1; j <= config.j2; ++j) {
        const std::size_t n = counts[static_cast<std::size_t>(j)];
        if (n < 2) continue;
        out.scales.push_back(j);
        out.counts.push_back(n);
        x.push_back(j);
        y.push_back(std::log2(static_cast<double>(n)));
        w.push_back(config.weighting == Weighting::count ? static_cast<double>(n) : 1.0);
    }
    require(x.size() >= 3, ErrorKind::insufficient_data,
            "box counting needs three box sizes with at least two occupied boxes");
    out.dimension = -weighted_line_fit(x, y, w).slope;
    return out;
}

std::vector<Point> von_koch_polyline(int depth, int resolution) {
    require(depth >= 0, ErrorKind::invalid_argument, "depth must be non-negative");
    require(depth <= resolution - 2, ErrorKind::invalid_argument,
            "depth " + std::to_string(depth) + " too deep for resolution " + std::to_string(resolution));
    const double N = std::ldexp(1.0, resolution);
    const double L = 0.75 * N;
    const double s3 = std::sqrt(3.0);
    const double bump = L / 3.0 * s3 / 2.0;
    const double height = L * s3 / 2.0 + bump;
    const double y0 = 0.5 * (N - height) + bump;
    const double cx = 0.5 * N;
    std::vector<Point> pts{{cx - L / 2, y0}, {cx + L / 2, y0}, {cx, y0 + L * s3 / 2}};
    const double c60 = 0.5, s60 = s3 / 2.0;
    for (int d = 0; d < depth; ++d) {
        std::vector<Point> next;
        next.reserve(pts.size() * 4);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Point a = pts[i], b = pts[(i + 1) % pts.size()];
            const Point v{(b.x - a.x) / 3.0, (b.y - a.y) / 3.0};
            const Point p1{a.x + v.x, a.y + v.y};
            const Point p3{a.x + 2.0 * v.x, a.y + 2.0 * v.y};
            // Clockwise on screen, so the outward side is a -60 degree turn.
            const Point peak{p1.x + v.x * c60 + v.y * s60, p1.y - v.x * s60 + v.y * c60};
            next.push_back(a);
            next.push_back(p1);
            next.push_back(peak);
            next.push_back(p3);
        }
        pts = std::move(next);
    }
    return pts;
}

void rasterize_segment(BinaryGrid& grid, Point a, Point b) {
    const long side = static_cast<long>(grid.side());
    auto mark = [&](long cx, long cy) {
        if (cx >= 0 && cy >= 0 && cx < side && cy < side)
            grid.set(static_cast<std::size_t>(cy), static_cast<std::size_t>(cx));
    };
    long cx = static_cast<long>(std::floor(a.x)), cy = static_cast<long>(std::floor(a.y));
    const long ex = static_cast<long>(std::floor(b.x)), ey = static_cast<long>(std::floor(b.y));
    const double dx = b.x - a.x, dy = b.y - a.y;
    constexpr double inf = std::numeric_limits<double>::infinity();
    const long sx = dx > 0 ? 1 : -1, sy = dy > 0 ? 1 : -1;
    double tx = dx > 0 ? (static_cast<double>(cx) + 1.0 - a.x) / dx
                       : (dx < 0 ? (a.x - static_cast<double>(cx)) / -dx : inf);
    double ty = dy > 0 ? (static_cast<double>(cy) + 1.0 - a.y) / dy
                       : (dy < 0 ? (a.y - static_cast<double>(cy)) / -dy : inf);
    const double ddx = dx != 0 ? 1.0 / std::abs(dx) : inf;
    const double ddy = dy != 0 ? 1.0 / std::abs(dy) : inf;
    constexpr double eps = 1e-12;
    for (;;) {
        mark(cx, cy);
        if (cx == ex && cy == ey) break;
        const double t = std::min(tx, ty);
        if (t > 1.0) break;
        if (tx < ty - eps) {
            cx += sx;
            tx += ddx;
        } else if (ty < tx - eps) {
            cy += sy;
            ty += ddy;
        } else {
            // Through a corner: the supercover keeps both side cells.
            mark(cx + sx, cy);
            mark(cx, cy + sy);
            cx += sx;
            cy += sy;
            tx += ddx;
            ty += ddy;
        }
    }
    mark(ex, ey);
}

BinaryGrid rasterize_von_koch(int depth, int resolution, KochFill fill) {
    const auto pts = von_koch_polyline(depth, resolution);
    BinaryGrid g = BinaryGrid::empty(resolution);
    for (std::size_t i = 0; i < pts.size(); ++i) rasterize_segment(g, pts[i], pts[(i + 1) % pts.size()]);
    if (fill == KochFill::filled) {
        const std::size_t side = g.side();
        std::vector<double> xs;
        for (std::size_t r = 0; r < side; ++r) {
            const double y = static_cast<double>(r) + 0.5;
            xs.clear();
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const Point p = pts[i], q = pts[(i + 1) % pts.size()];
                if ((p.y <= y && y < q.y) || (q.y <= y && y < p.y))
                    xs.push_back(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
            }
            std::sort(xs.begin(), xs.end());
            for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
                const long c0 = std::max(0L, static_cast<long>(std::ceil(xs[k] - 0.5)));
                const long c1 = std::min(static_cast<long>(side) - 1, static_cast<long>(std::ceil(xs[k + 1] - 0.5)) - 1);
                for (long c = c0; c <= c1; ++c) g.set(r, static_cast<std::size_t>(c));
            }
        }
    }
    return g;
}

GraphDimension graph_dimension_from_oscillation(const Signal& signal, const RegressionConfig& config,
                                                const GraphDimensionOptions& options) {
    signal.require_finite();
    GraphDimension out;
    const double d = signal.dim();
    const auto [lo, hi] = std::minmax_element(signal.samples().begin(), signal.samples().end());
    if (signal.empty() || *lo == *hi) {
        out.oscillation_based = out.leader_based = d;
        out.degenerate = true;
        out.warnings.push_back("constant signal: graph dimension equals the ambient dimension");
        return out;
    }
    const double p1[] = {1.0};
    auto osc_exponent = [&](int order) {
        return fit_scaling_function(oscillation_structure_functions(signal, p1, config.j2, order), config)
            .values[0];
    };
    out.oscillation_order = options.oscillation_order;
    out.O1 = osc_exponent(options.oscillation_order);
    if (options.auto_second_order && options.oscillation_order == 1 && out.O1 >= 1.0) {
        out.O1 = osc_exponent(2);
        out.oscillation_order = 2;
        out.warnings.push_back("first-order oscillation exponent reached 1; second order used");
    }
    out.oscillation_based = std::max(d, d + 1.0 - out.O1);

    const auto filter = design_daubechies_filter(options.filter_order);
    const auto pyr = dwt_forward(signal, filter, max_admissible_level(signal), Boundary::discard);
    const auto leaders = compute_leaders(pyr);
    out.zeta1 = fit_scaling_function(structure_functions(leaders, p1), config).values[0];
    out.leader_based = std::max(d, d + 1.0 - out.zeta1);
    return out;
}

}  // namespace mfa
