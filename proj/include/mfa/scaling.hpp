#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mfa/dwt.hpp"
#include "mfa/leaders.hpp"
#include "mfa/signal.hpp"

namespace mfa {

enum class Source { coefficients, leaders, increments, oscillations, mass };

std::string to_string(Source s);

// Valid atoms of one octave, in raster order of their cubes.
struct LevelAtoms {
    int j = 0;
    std::vector<double> values;
};

std::vector<LevelAtoms> atoms_of(const CoefficientPyramid& pyramid);  // all bands pooled
std::vector<LevelAtoms> atoms_of(const LeaderPyramid& leaders);

// log2 of per-octave means of |atom|^p. Rows of log2_stat follow p_grid,
// columns follow scales; NaN marks a cell that cannot be used.
struct StructureFunctionTable {
    Source source = Source::coefficients;
    int dim = 1;
    double integration_order = 0.0;
    std::vector<double> p_grid;
    std::vector<int> scales;
    std::vector<std::vector<double>> log2_stat;
    std::vector<std::size_t> counts;        // non-zero atoms per octave
    std::vector<std::size_t> zero_counts;   // atoms excluded for being exactly zero
    std::vector<std::uint8_t> negative_ok;  // octave usable for p < 0
    // Cumulants of ln|atom| (k-statistics), cumulants[m-1][scale index].
    std::vector<std::vector<double>> cumulants;
    std::vector<std::string> warnings;

    int max_cumulant() const { return static_cast<int>(cumulants.size()); }
    std::size_t scale_index(int j) const;
};

StructureFunctionTable table_from_atoms(Source source, int dim, double integration_order,
                                        std::span<const LevelAtoms> levels,
                                        std::span<const double> p_grid, int cumulant_order = 0);

StructureFunctionTable structure_functions(const CoefficientPyramid& pyramid,
                                           std::span<const double> p_grid);
StructureFunctionTable structure_functions(const LeaderPyramid& leaders,
                                           std::span<const double> p_grid, int cumulant_order = 0);
// Differences of the given order at lag 2^j along each axis, j = 1..max_level.
StructureFunctionTable increment_structure_functions(const Signal& signal,
                                                     std::span<const double> p_grid,
                                                     int difference_order, int max_level);
// sup - inf (order 1) or largest centred second difference (order 2) over the
// samples of each closed dyadic cube.
StructureFunctionTable oscillation_structure_functions(const Signal& signal,
                                                       std::span<const double> p_grid,
                                                       int max_level, int oscillation_order = 1);
std::vector<LevelAtoms> oscillation_atoms(const Signal& signal, int max_level,
                                          int oscillation_order = 1);
// Partition function of a 1D measure given as cell masses: sums of mass^q
// over aggregated cells of 2^j samples. log2_stat holds log2 Z(q, j).
StructureFunctionTable partition_function(const Signal& masses, std::span<const double> q_grid,
                                          int max_level);

enum class Weighting { uniform, count };

std::string to_string(Weighting w);
Weighting parse_weighting(const std::string& name);

struct RegressionConfig {
    int j1 = 1;
    int j2 = 1;
    Weighting weighting = Weighting::count;
    std::size_t min_atoms = 8;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.0;
    int resamples = 0;
};

struct Quantity {
    double value = 0.0;
    std::optional<Interval> ci;
};

struct ScalingEstimate {
    Source source = Source::leaders;
    int dim = 1;
    double integration_order = 0.0;
    int j1 = 0;
    int j2 = 0;
    std::vector<double> p_grid;
    std::vector<double> values;  // eta(p) for coefficients/increments, zeta(p) for leaders
    std::vector<double> intercepts;
    std::vector<std::optional<Interval>> value_ci;
    std::optional<Quantity> h_min;
    std::vector<double> cumulants;  // c_1..c_M
    std::vector<double> cumulant_intercepts;
    std::vector<std::optional<Interval>> cumulant_ci;
    std::vector<std::string> warnings;

    // Exact lookup on the p grid.
    std::optional<double> at(double p) const;
    std::optional<Quantity> quantity_at(double p) const;
    // sum_m c_m p^m / m!
    double cumulant_expansion(double p) const;
};

// Scaling function: least-squares slope of log2 statistic against j.
ScalingEstimate fit_scaling_function(const StructureFunctionTable& table,
                                     const RegressionConfig& config);

struct HminEstimate {
    double value = 0.0;
    double intercept = 0.0;
    std::vector<int> scales;
    std::vector<double> log2_sup;
};

HminEstimate estimate_hmin(const CoefficientPyramid& pyramid, const RegressionConfig& config);
HminEstimate hmin_from_atoms(std::span<const LevelAtoms> atoms, std::span<const std::size_t> counts,
                             const RegressionConfig& config);

struct CumulantFit {
    std::vector<double> c;
    std::vector<double> intercepts;
};

// Slopes of the ln-leader cumulants against j ln 2.
CumulantFit fit_log_cumulants(const StructureFunctionTable& table, const RegressionConfig& config);
CumulantFit estimate_log_cumulants(const LeaderPyramid& leaders, int M,
                                   const RegressionConfig& config);

// Unbiased k-statistics k_1..k_M of a sample, M <= 4.
std::vector<double> k_statistics(std::span<const double> x, int M);

struct LegendreSpectrum {
    int dim = 1;
    std::vector<double> h;
    std::vector<double> L;
    std::vector<double> argmin_p;
    std::vector<std::uint8_t> negative;  // L(h) < 0 (empty set)
    std::optional<double> h_lo;          // support endpoints where L >= 0
    std::optional<double> h_hi;
    std::vector<std::string> warnings;
};

// L(h) = min over p of d + h p - zeta(p); p = 0 always takes part with zeta(0) = 0.
LegendreSpectrum legendre_transform(int dim, std::span<const double> p_grid,
                                    std::span<const double> zeta, std::span<const double> h_grid);
LegendreSpectrum legendre_spectrum(const ScalingEstimate& zeta, std::span<const double> h_grid);
// Evenly spaced grid spanning the slopes of zeta over its p grid.
std::vector<double> default_h_grid(const ScalingEstimate& zeta, std::size_t points = 201);

enum class Verdict { yes, no, inconclusive };

std::string to_string(Verdict v);

struct MembershipReport {
    Verdict in_BV = Verdict::inconclusive;
    Verdict in_L2 = Verdict::inconclusive;
    Verdict bounded_quadratic_variation = Verdict::inconclusive;
    Verdict locally_bounded = Verdict::inconclusive;
    std::vector<std::string> notes;
};

// Strict comparison of a quantity against a threshold, using its CI when present.
Verdict compare(const Quantity& q, double threshold);

// eta from coefficients supplies eta(1), eta(2), h_min; zeta from leaders supplies zeta(2).
MembershipReport membership_tests(const ScalingEstimate& eta, const ScalingEstimate& zeta);

struct SubordinationResult {
    double H = 0.0;
    double p_root = 0.0;
    double H_lo = 0.0;  // grid bracket mapped to H
    double H_hi = 0.0;
};

// Solves eta(1/H) = 1 on the piecewise-linear interpolation of eta.
SubordinationResult infer_subordination_H(const ScalingEstimate& eta);

}  // namespace mfa
