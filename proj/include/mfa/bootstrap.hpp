#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mfa/dwt.hpp"
#include "mfa/leaders.hpp"
#include "mfa/scaling.hpp"

namespace mfa {

// What one estimation pass computes from a pyramid.
struct AnalysisBundle {
    Source source = Source::leaders;  // coefficients or leaders
    std::vector<double> p_grid;
    int cumulant_order = 0;           // leaders only, 0..4
    bool hmin = true;
    RegressionConfig regression;
};

// Point estimate: zeta (or eta) on the grid, cumulants and h_min, no intervals.
ScalingEstimate analyze_pyramid(const CoefficientPyramid& pyramid, const AnalysisBundle& bundle);
// Leaders only: h_min then comes from the per-octave supremum of the leaders.
ScalingEstimate analyze_pyramid(const LeaderPyramid& leaders, const AnalysisBundle& bundle);

struct BootstrapConfig {
    int B = 199;
    int block_length = 0;  // at the finest analysed octave; 0 means twice the filter length (8 for leader input)
    // Floor on the block length at coarse octaves. Neighbouring leaders share
    // their 3^d neighbourhood, so single-position blocks understate the spread.
    int min_block = 3;
    double ci_level = 0.9;
    std::uint64_t seed = 0;
};

// Circular block bootstrap. Blocks of b_j = max(min_block, ceil(b / 2^{j - j1})) positions
// per axis wrap around the end of each octave, so edge atoms are drawn as often
// as inner ones. Blocks come from shared start fractions, so a block at
// octave j covers roughly the same stretch of the signal as the block with the
// same fraction at the finest analysed octave. Each resample reruns the whole
// estimation with the original atom counts as regression weights; intervals are
// percentile intervals.
ScalingEstimate bootstrap_ci(const CoefficientPyramid& pyramid, const AnalysisBundle& bundle,
                             const BootstrapConfig& config);
ScalingEstimate bootstrap_ci(const LeaderPyramid& leaders, const AnalysisBundle& bundle,
                             const BootstrapConfig& config);

// Percentile interval of a sample (linear interpolation between order statistics).
Interval percentile_interval(std::vector<double> sample, double level);

}  // namespace mfa
