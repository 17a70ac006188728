#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mfa/error.hpp"
#include "mfa/scaling.hpp"

namespace mfa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMaxZeroFraction = 0.1;

bool allows_negative_p(Source s) {
    return s == Source::leaders || s == Source::oscillations || s == Source::mass;
}

// log2 of the mean of 2^{p l_i}.
double log2_mean_pow(std::span<const double> log2_abs, double p) {
    double m = -std::numeric_limits<double>::infinity();
    for (double l : log2_abs) m = std::max(m, p * l);
    double s = 0.0;
    for (double l : log2_abs) s += std::exp2(p * l - m);
    return m + std::log2(s) - std::log2(static_cast<double>(log2_abs.size()));
}

void check_grid(Source source, std::span<const double> p_grid) {
    require(!p_grid.empty(), ErrorKind::invalid_argument, "empty p grid");
    for (double p : p_grid) {
        require(std::isfinite(p), ErrorKind::invalid_argument, "non-finite p in grid");
        if (p < 0.0 && !allows_negative_p(source))
            fail(ErrorKind::invalid_argument,
                 "negative p requires leaders or oscillations, not " + to_string(source));
    }
}

}  // namespace

std::string to_string(Source s) {
    switch (s) {
        case Source::coefficients: return "coefficients";
        case Source::leaders: return "leaders";
        case Source::increments: return "increments";
        case Source::oscillations: return "oscillations";
        case Source::mass: return "mass";
    }
    return "unknown";
}

std::size_t StructureFunctionTable::scale_index(int j) const {
    for (std::size_t i = 0; i < scales.size(); ++i)
        if (scales[i] == j) return i;
    fail(ErrorKind::invalid_argument, "octave " + std::to_string(j) + " not in the table");
}

std::vector<LevelAtoms> atoms_of(const CoefficientPyramid& pyramid) {
    std::vector<LevelAtoms> out;
    for (const PyramidLevel& lv : pyramid.levels()) {
        LevelAtoms a;
        a.j = lv.j;
        a.values.reserve(lv.valid_count() * lv.bands.size());
        for (std::size_t i = 0; i < lv.size(); ++i) {
            if (!lv.valid[i]) continue;
            for (const auto& band : lv.bands) a.values.push_back(band[i]);
        }
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<LevelAtoms> atoms_of(const LeaderPyramid& leaders) {
    std::vector<LevelAtoms> out;
    for (const LeaderLevel& lv : leaders.levels()) {
        LevelAtoms a;
        a.j = lv.j;
        a.values.reserve(lv.valid_count());
        for (std::size_t i = 0; i < lv.size(); ++i)
            if (lv.valid[i]) a.values.push_back(lv.values[i]);
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<double> k_statistics(std::span<const double> x, int M) {
    require(M >= 1 && M <= 4, ErrorKind::invalid_argument, "cumulant order must lie in [1, 4]");
    const double n = static_cast<double>(x.size());
    require(x.size() >= static_cast<std::size_t>(M) + 1, ErrorKind::insufficient_data,
            "k-statistics of order " + std::to_string(M) + " need more samples");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean, d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    std::vector<double> k{mean};
    if (M >= 2) k.push_back(n / (n - 1.0) * m2);
    if (M >= 3) k.push_back(n * n / ((n - 1.0) * (n - 2.0)) * m3);
    if (M >= 4)
        k.push_back(n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) /
                    ((n - 1.0) * (n - 2.0) * (n - 3.0)));
    return k;
}

StructureFunctionTable table_from_atoms(Source source, int dim, double integration_order,
                                        std::span<const LevelAtoms> levels,
                                        std::span<const double> p_grid, int cumulant_order) {
    check_grid(source, p_grid);
    require(cumulant_order >= 0 && cumulant_order <= 4, ErrorKind::invalid_argument,
            "cumulant order must lie in [0, 4]");
    StructureFunctionTable t;
    t.source = source;
    t.dim = dim;
    t.integration_order = integration_order;
    t.p_grid.assign(p_grid.begin(), p_grid.end());
    t.log2_stat.assign(p_grid.size(), std::vector<double>(levels.size(), kNaN));
    t.cumulants.assign(static_cast<std::size_t>(cumulant_order), std::vector<double>(levels.size(), kNaN));

    std::vector<double> l2, ln;
    for (std::size_t s = 0; s < levels.size(); ++s) {
        const LevelAtoms& lv = levels[s];
        t.scales.push_back(lv.j);
        l2.clear();
        for (double v : lv.values)
            if (v != 0.0) l2.push_back(std::log2(std::abs(v)));
        const std::size_t zeros = lv.values.size() - l2.size();
        t.counts.push_back(l2.size());
        t.zero_counts.push_back(zeros);
        const bool neg_ok = !lv.values.empty() &&
                            static_cast<double>(zeros) <= kMaxZeroFraction * static_cast<double>(lv.values.size());
        t.negative_ok.push_back(neg_ok ? 1 : 0);
        if (l2.empty()) {
            t.warnings.push_back("octave " + std::to_string(lv.j) + " has no non-zero atoms; dropped");
            continue;
        }
        const double nonzero_share =
            std::log2(static_cast<double>(l2.size()) / static_cast<double>(lv.values.size()));
        for (std::size_t i = 0; i < p_grid.size(); ++i) {
            const double p = p_grid[i];
            if (p < 0.0 && !neg_ok) continue;
            // Zeros add nothing to the sum for p > 0 but still count as atoms.
            if (p == 0.0)
                t.log2_stat[i][s] = 0.0;
            else if (p > 0.0)
                t.log2_stat[i][s] = log2_mean_pow(l2, p) + nonzero_share;
            else
                t.log2_stat[i][s] = log2_mean_pow(l2, p);
        }
        if (cumulant_order > 0 && l2.size() >= static_cast<std::size_t>(cumulant_order) + 1) {
            ln.resize(l2.size());
            for (std::size_t i = 0; i < l2.size(); ++i) ln[i] = l2[i] * std::numbers::ln2;
            const auto k = k_statistics(ln, cumulant_order);
            for (int m = 0; m < cumulant_order; ++m) t.cumulants[static_cast<std::size_t>(m)][s] = k[static_cast<std::size_t>(m)];
        }
    }
    return t;
}

StructureFunctionTable structure_functions(const CoefficientPyramid& pyramid,
                                           std::span<const double> p_grid) {
    const auto atoms = atoms_of(pyramid);
    return table_from_atoms(Source::coefficients, pyramid.dim(), pyramid.integration_order(), atoms,
                            p_grid);
}

StructureFunctionTable structure_functions(const LeaderPyramid& leaders,
                                           std::span<const double> p_grid, int cumulant_order) {
    const auto atoms = atoms_of(leaders);
    return table_from_atoms(Source::leaders, leaders.dim(), leaders.integration_order(), atoms,
                            p_grid, cumulant_order);
}

StructureFunctionTable increment_structure_functions(const Signal& signal,
                                                     std::span<const double> p_grid,
                                                     int difference_order, int max_level) {
    signal.require_finite();
    require(difference_order >= 1 && difference_order <= 8, ErrorKind::invalid_argument,
            "difference order must lie in [1, 8]");
    require(max_level >= 1, ErrorKind::invalid_argument, "need at least one octave");
    std::vector<double> binom(static_cast<std::size_t>(difference_order) + 1, 1.0);
    for (int i = 1; i <= difference_order; ++i)
        binom[static_cast<std::size_t>(i)] =
            binom[static_cast<std::size_t>(i - 1)] * (difference_order - i + 1) / i;

    std::vector<LevelAtoms> levels;
    const std::size_t rows = signal.rows(), cols = signal.cols();
    for (int j = 1; j <= max_level; ++j) {
        const std::size_t lag = std::size_t{1} << j;
        const std::size_t reach = lag * static_cast<std::size_t>(difference_order);
        require(reach < signal.min_axis(), ErrorKind::invalid_argument,
                "increment lag exceeds the signal at octave " + std::to_string(j));
        LevelAtoms a;
        a.j = j;
        auto diff = [&](std::size_t start, std::size_t stride) {
            double s = 0.0;
            for (int i = 0; i <= difference_order; ++i) {
                const double sign = (difference_order - i) % 2 == 0 ? 1.0 : -1.0;
                s += sign * binom[static_cast<std::size_t>(i)] *
                     signal[start + static_cast<std::size_t>(i) * lag * stride];
            }
            return s;
        };
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c + reach < cols; ++c) a.values.push_back(diff(r * cols + c, 1));
        if (signal.dim() == 2)
            for (std::size_t r = 0; r + reach < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c) a.values.push_back(diff(r * cols + c, cols));
        levels.push_back(std::move(a));
    }
    return table_from_atoms(Source::increments, signal.dim(), 0.0, levels, p_grid);
}

std::vector<LevelAtoms> oscillation_atoms(const Signal& signal, int max_level, int oscillation_order) {
    signal.require_finite();
    require(oscillation_order == 1 || oscillation_order == 2, ErrorKind::invalid_argument,
            "oscillation order must be 1 or 2");
    require(oscillation_order == 1 || signal.dim() == 1, ErrorKind::invalid_argument,
            "second-order oscillations are implemented for 1D signals only");
    require(max_level >= 1, ErrorKind::invalid_argument, "need at least one octave");
    const std::size_t rows = signal.rows(), cols = signal.cols();
    std::vector<LevelAtoms> levels;
    for (int j = 1; j <= max_level; ++j) {
        const std::size_t w = std::size_t{1} << j;
        const std::size_t nc = (cols - 1) / w;
        const std::size_t nr = signal.dim() == 1 ? 1 : (rows - 1) / w;
        require(nc >= 1 && nr >= 1, ErrorKind::invalid_argument,
                "octave " + std::to_string(j) + " exceeds the signal");
        LevelAtoms a;
        a.j = j;
        a.values.reserve(nr * nc);
        for (std::size_t kr = 0; kr < nr; ++kr) {
            for (std::size_t kc = 0; kc < nc; ++kc) {
                const std::size_t r0 = signal.dim() == 1 ? 0 : kr * w;
                const std::size_t r1 = signal.dim() == 1 ? 0 : r0 + w;
                const std::size_t c0 = kc * w, c1 = c0 + w;
                double os = 0.0;
                if (oscillation_order == 1) {
                    double lo = signal.at(r0, c0), hi = lo;
                    for (std::size_t r = r0; r <= r1; ++r)
                        for (std::size_t c = c0; c <= c1; ++c) {
                            const double v = signal.at(r, c);
                            lo = std::min(lo, v);
                            hi = std::max(hi, v);
                        }
                    os = hi - lo;
                } else {
                    for (std::size_t x = c0 + 1; x < c1; ++x) {
                        const std::size_t hmax = std::min(x - c0, c1 - x);
                        for (std::size_t h = 1; h <= hmax; ++h)
                            os = std::max(os, std::abs(signal[x + h] - 2.0 * signal[x] + signal[x - h]));
                    }
                }
                a.values.push_back(os);
            }
        }
        levels.push_back(std::move(a));
    }
    return levels;
}

StructureFunctionTable oscillation_structure_functions(const Signal& signal,
                                                       std::span<const double> p_grid,
                                                       int max_level, int oscillation_order) {
    const auto atoms = oscillation_atoms(signal, max_level, oscillation_order);
    return table_from_atoms(Source::oscillations, signal.dim(), 0.0, atoms, p_grid);
}

StructureFunctionTable partition_function(const Signal& masses, std::span<const double> q_grid,
                                          int max_level) {
    require(masses.dim() == 1, ErrorKind::invalid_argument, "partition function expects a 1D measure");
    masses.require_finite();
    for (double m : masses.samples())
        require(m >= 0.0, ErrorKind::invalid_data, "cell masses must be non-negative");
    require(max_level >= 0 && (std::size_t{1} << max_level) <= masses.size(),
            ErrorKind::invalid_argument, "partition level exceeds the measure");
    std::vector<LevelAtoms> levels;
    std::vector<double> cur(masses.samples().begin(), masses.samples().end());
    for (int j = 0; j <= max_level; ++j) {
        if (j > 0) {
            std::vector<double> next(cur.size() / 2);
            for (std::size_t k = 0; k < next.size(); ++k) next[k] = cur[2 * k] + cur[2 * k + 1];
            cur = std::move(next);
        }
        levels.push_back({j, cur});
    }
    auto t = table_from_atoms(Source::mass, 1, 0.0, levels, q_grid);
    // Mean -> sum. Positive q averaged over all cells, the rest over non-zero cells.
    for (std::size_t i = 0; i < q_grid.size(); ++i)
        for (std::size_t s = 0; s < t.scales.size(); ++s) {
            const std::size_t n = q_grid[i] > 0.0 ? t.counts[s] + t.zero_counts[s] : t.counts[s];
            t.log2_stat[i][s] += std::log2(static_cast<double>(n));
        }
    return t;
}

}  // namespace mfa
