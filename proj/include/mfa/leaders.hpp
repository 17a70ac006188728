#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mfa/dwt.hpp"

namespace mfa {

struct LeaderLevel {
    int j = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;       // d_{j,k} >= 0, row-major
    std::vector<std::uint8_t> valid;  // 0 where 3*lambda meets a masked atom or the border

    std::size_t size() const { return rows * cols; }
    std::size_t valid_count() const;
};

class LeaderPyramid {
public:
    LeaderPyramid(int dim, Boundary boundary, double integration_order,
                  std::vector<LeaderLevel> levels);

    int dim() const { return dim_; }
    Boundary boundary() const { return boundary_; }
    double integration_order() const { return integration_order_; }
    int num_levels() const { return static_cast<int>(levels_.size()); }
    const LeaderLevel& level(int j) const;
    std::span<const LeaderLevel> levels() const { return levels_; }

private:
    int dim_;
    Boundary boundary_;
    double integration_order_;
    std::vector<LeaderLevel> levels_;
};

// Supremum of |c| over every finer-or-equal atom inside the 3^d neighbourhood
// of each cube, all orientation bands pooled.
LeaderPyramid compute_leaders(const CoefficientPyramid& pyramid);

// Per-cube suprema over the cube itself and all its descendants, before the
// neighbourhood maximum. Exposed for tests and for h_min style diagnostics.
std::vector<std::vector<double>> cube_suprema(const CoefficientPyramid& pyramid);

struct PointwiseEstimate {
    double h = 0.0;
    double intercept = 0.0;
};

// Least-squares slope of log2 d_{lambda_j(x0)} against j for j in [j1, j2],
// where lambda_j(x0) is the octave-j cube containing x0 in [0,1)^d, given as
// (row, col) in 2D. This is
// the finite-scale stand-in for the liminf of the decay rate.
PointwiseEstimate pointwise_holder_estimate(const LeaderPyramid& leaders,
                                            std::span<const double> x0, int j1, int j2);

}  // namespace mfa
