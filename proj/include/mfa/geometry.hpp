#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mfa/scaling.hpp"
#include "mfa/signal.hpp"

namespace mfa {

// Square occupancy grid of 2^resolution cells per side, row-major, row 0 at the top.
struct BinaryGrid {
    int resolution = 0;
    std::vector<std::uint8_t> cells;

    static BinaryGrid empty(int resolution);
    std::size_t side() const { return std::size_t{1} << resolution; }
    bool at(std::size_t r, std::size_t c) const { return cells[r * side() + c] != 0; }
    void set(std::size_t r, std::size_t c) { cells[r * side() + c] = 1; }
    std::size_t occupied() const;
    // 0/1 image for wavelet analysis.
    Signal to_signal() const;
};

struct BoxCounting {
    double dimension = 0.0;
    std::vector<int> scales;            // box side 2^j cells
    std::vector<std::size_t> counts;    // occupied boxes
};

// Minus the slope of log2 N_j against j, N_j counting dyadic boxes of side 2^j
// cells that meet the set, over [config.j1, config.j2].
BoxCounting box_dimension(const BinaryGrid& grid, const RegressionConfig& config);
std::vector<std::size_t> box_counts(const BinaryGrid& grid);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class KochFill { boundary, filled };

// Closed polyline (first point not repeated) of the depth-d snowflake on an
// equilateral triangle, 3 * 4^d segments, bumps pointing outward. Coordinates
// are in cell units of a 2^resolution grid with y growing downward.
std::vector<Point> von_koch_polyline(int depth, int resolution);

// Cells crossed by the segment (supercover traversal).
void rasterize_segment(BinaryGrid& grid, Point a, Point b);

BinaryGrid rasterize_von_koch(int depth, int resolution, KochFill fill);

struct GraphDimension {
    double oscillation_based = 0.0;  // max(d, d + 1 - O(1))
    double leader_based = 0.0;       // max(d, d + 1 - zeta(1))
    double O1 = 0.0;
    double zeta1 = 0.0;
    int oscillation_order = 1;
    bool degenerate = false;
    std::vector<std::string> warnings;
};

struct GraphDimensionOptions {
    int filter_order = 3;
    int oscillation_order = 1;
    // Switch to second-order oscillations when the first-order O(1) reaches 1.
    bool auto_second_order = false;
};

GraphDimension graph_dimension_from_oscillation(const Signal& signal, const RegressionConfig& config,
                                                const GraphDimensionOptions& options = {});

}  // namespace mfa
