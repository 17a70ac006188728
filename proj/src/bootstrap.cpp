#include "mfa/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "mfa/error.hpp"
#include "mfa/parallel.hpp"
#include "mfa/rng.hpp"

namespace mfa {

namespace {

// One octave seen as a grid of positions, each holding the atoms used for the
// structure functions and those used for the h_min supremum.
struct Grid {
    int j = 0;
    std::size_t rows = 0, cols = 0;
    std::vector<std::vector<double>> stat;
    std::vector<std::uint8_t> stat_valid;
    std::vector<std::vector<double>> sup;
    std::vector<std::uint8_t> sup_valid;
};

struct Prepared {
    Source source = Source::leaders;
    int dim = 1;
    double integration_order = 0.0;
    int filter_length = 0;
    std::vector<Grid> grids;
};

void check_bundle(const AnalysisBundle& b) {
    require(b.source == Source::coefficients || b.source == Source::leaders, ErrorKind::invalid_argument,
            "pyramid analysis runs on coefficients or leaders");
    require(!b.p_grid.empty(), ErrorKind::invalid_argument, "empty p grid");
    require(b.cumulant_order >= 0 && b.cumulant_order <= 4, ErrorKind::invalid_argument,
            "cumulant order must lie in [0, 4]");
    require(b.cumulant_order == 0 || b.source == Source::leaders, ErrorKind::invalid_argument,
            "log-cumulants are computed from leaders");
}

Prepared prepare(const CoefficientPyramid& pyramid, const AnalysisBundle& bundle) {
    Prepared out;
    out.source = bundle.source;
    out.dim = pyramid.dim();
    out.integration_order = pyramid.integration_order();
    out.filter_length = 2 * pyramid.filter_order();
    std::optional<LeaderPyramid> leaders;
    if (bundle.source == Source::leaders) leaders = compute_leaders(pyramid);
    for (int j = 1; j <= pyramid.num_levels(); ++j) {
        const PyramidLevel& lv = pyramid.level(j);
        Grid g;
        g.j = j;
        g.rows = lv.rows;
        g.cols = lv.cols;
        g.sup = lv.bands;
        g.sup_valid = lv.valid;
        if (leaders) {
            g.stat = {leaders->level(j).values};
            g.stat_valid = leaders->level(j).valid;
        } else {
            g.stat = lv.bands;
            g.stat_valid = lv.valid;
        }
        out.grids.push_back(std::move(g));
    }
    return out;
}

Prepared prepare(const LeaderPyramid& leaders, const AnalysisBundle& bundle) {
    require(bundle.source == Source::leaders, ErrorKind::invalid_argument,
            "a leader pyramid can only be analysed as leaders");
    Prepared out;
    out.source = Source::leaders;
    out.dim = leaders.dim();
    out.integration_order = leaders.integration_order();
    out.filter_length = 4;
    for (const LeaderLevel& lv : leaders.levels()) {
        Grid g;
        g.j = lv.j;
        g.rows = lv.rows;
        g.cols = lv.cols;
        g.stat = {lv.values};
        g.stat_valid = lv.valid;
        g.sup = g.stat;
        g.sup_valid = lv.valid;
        out.grids.push_back(std::move(g));
    }
    return out;
}

struct Gathered {
    std::vector<LevelAtoms> stat, sup;
    std::vector<std::size_t> sup_counts;
};

void gather_position(const Grid& g, std::size_t i, LevelAtoms& stat, LevelAtoms& sup, std::size_t& n_sup) {
    if (g.stat_valid[i])
        for (const auto& band : g.stat) stat.values.push_back(band[i]);
    if (g.sup_valid[i]) {
        for (const auto& band : g.sup) sup.values.push_back(band[i]);
        ++n_sup;
    }
}

// No position lists means every position of every octave.
Gathered gather(const Prepared& p, const std::vector<std::vector<std::size_t>>* positions) {
    Gathered out;
    for (std::size_t k = 0; k < p.grids.size(); ++k) {
        const Grid& g = p.grids[k];
        LevelAtoms stat{g.j, {}}, sup{g.j, {}};
        std::size_t n_sup = 0;
        if (positions) {
            for (std::size_t i : (*positions)[k]) gather_position(g, i, stat, sup, n_sup);
        } else {
            for (std::size_t i = 0; i < g.rows * g.cols; ++i) gather_position(g, i, stat, sup, n_sup);
        }
        out.stat.push_back(std::move(stat));
        out.sup.push_back(std::move(sup));
        out.sup_counts.push_back(n_sup);
    }
    return out;
}

struct Weights {
    std::vector<std::size_t> stat;
    std::vector<std::size_t> sup;
};

ScalingEstimate estimate(const Prepared& p, const Gathered& atoms, const AnalysisBundle& bundle,
                         const Weights* weights) {
    auto table = table_from_atoms(p.source, p.dim, p.integration_order, atoms.stat, bundle.p_grid,
                                  bundle.cumulant_order);
    if (weights) table.counts = weights->stat;
    ScalingEstimate est = fit_scaling_function(table, bundle.regression);
    if (bundle.hmin) {
        const auto h = hmin_from_atoms(atoms.sup, weights ? weights->sup : atoms.sup_counts, bundle.regression);
        est.h_min = Quantity{h.value, std::nullopt};
    }
    return est;
}

// Octaves that enter the fits, finest first.
std::vector<std::size_t> analysed_levels(const Prepared& p, const RegressionConfig& reg) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < p.grids.size(); ++k)
        if (p.grids[k].j >= reg.j1 && p.grids[k].j <= reg.j2) out.push_back(k);
    return out;
}

ScalingEstimate run_bootstrap(const Prepared& prep, const AnalysisBundle& bundle, const BootstrapConfig& config) {
    check_bundle(bundle);
    require(config.B >= 39, ErrorKind::invalid_argument, "bootstrap needs at least 39 resamples");
    require(config.block_length >= 0 && config.min_block >= 1, ErrorKind::invalid_argument,
            "block lengths must be positive");
    require(config.ci_level > 0.0 && config.ci_level < 1.0, ErrorKind::invalid_argument,
            "confidence level must lie in (0, 1)");

    const Gathered full = gather(prep, nullptr);
    ScalingEstimate point = estimate(prep, full, bundle, nullptr);

    const auto levels = analysed_levels(prep, bundle.regression);
    require(!levels.empty(), ErrorKind::insufficient_scales, "no octave inside the scale range");
    const int b1 = config.block_length > 0 ? config.block_length : 2 * prep.filter_length;
    const int j_first = prep.grids[levels.front()].j;
    std::vector<std::size_t> block(prep.grids.size(), 0);
    std::size_t n_fractions = 0;
    for (std::size_t k : levels) {
        const Grid& g = prep.grids[k];
        const double b = std::ceil(static_cast<double>(b1) / std::ldexp(1.0, g.j - j_first));
        block[k] = static_cast<std::size_t>(std::max(static_cast<double>(config.min_block), b));
        require(g.cols >= 2 * block[k] && (prep.dim == 1 || g.rows >= 2 * block[k]), ErrorKind::insufficient_data,
                "octave " + std::to_string(g.j) + " is too short for blocks of " + std::to_string(block[k]));
        const std::size_t kr = prep.dim == 2 ? (g.rows + block[k] - 1) / block[k] : 1;
        const std::size_t kc = (g.cols + block[k] - 1) / block[k];
        n_fractions = std::max(n_fractions, kr * kc);
    }

    // Original counts stay the regression weights in every resample.
    Weights weights;
    {
        auto t = table_from_atoms(prep.source, prep.dim, prep.integration_order, full.stat, bundle.p_grid, 0);
        weights.stat = t.counts;
        weights.sup = full.sup_counts;
    }

    const std::size_t np = bundle.p_grid.size(), nc = static_cast<std::size_t>(bundle.cumulant_order);
    std::vector<std::optional<ScalingEstimate>> draws(static_cast<std::size_t>(config.B));
    parallel_for(draws.size(), [&](std::size_t r) {
        Philox rng(config.seed, static_cast<std::uint64_t>(r));
        std::vector<double> ur(n_fractions), uc(n_fractions);
        for (std::size_t i = 0; i < n_fractions; ++i) {
            uc[i] = rng.uniform();
            ur[i] = prep.dim == 2 ? rng.uniform() : 0.0;
        }
        std::vector<std::vector<std::size_t>> positions(prep.grids.size());
        for (std::size_t k : levels) {
            const Grid& g = prep.grids[k];
            const std::size_t b = block[k], total = g.rows * g.cols;
            const std::size_t br = prep.dim == 2 ? b : 1;
            auto& pos = positions[k];
            pos.reserve(total);
            for (std::size_t f = 0; pos.size() < total; ++f) {
                const std::size_t sc = static_cast<std::size_t>(uc[f] * static_cast<double>(g.cols));
                const std::size_t sr = prep.dim == 2 ? static_cast<std::size_t>(ur[f] * static_cast<double>(g.rows)) : 0;
                for (std::size_t dr = 0; dr < br && pos.size() < total; ++dr)
                    for (std::size_t dc = 0; dc < b && pos.size() < total; ++dc)
                        pos.push_back(((sr + dr) % g.rows) * g.cols + (sc + dc) % g.cols);
            }
        }
        try {
            draws[r] = estimate(prep, gather(prep, &positions), bundle, &weights);
        } catch (const Error&) {
        }
    });

    std::vector<std::vector<double>> zeta_s(np), cum_s(nc);
    std::vector<double> hmin_s;
    int failures = 0;
    for (const auto& e : draws) {
        if (!e) {
            ++failures;
            continue;
        }
        for (std::size_t i = 0; i < np; ++i) zeta_s[i].push_back(e->values[i]);
        for (std::size_t m = 0; m < nc; ++m) cum_s[m].push_back(e->cumulants[m]);
        if (e->h_min) hmin_s.push_back(e->h_min->value);
    }
    const int ok = config.B - failures;
    require(ok >= 39, ErrorKind::insufficient_data,
            std::to_string(failures) + " of " + std::to_string(config.B) + " resamples could not be analysed");
    if (failures > 0)
        point.warnings.push_back(std::to_string(failures) + " bootstrap resamples failed and were skipped");

    for (std::size_t i = 0; i < np; ++i) point.value_ci[i] = percentile_interval(zeta_s[i], config.ci_level);
    point.cumulant_ci.resize(nc);
    for (std::size_t m = 0; m < nc; ++m) point.cumulant_ci[m] = percentile_interval(cum_s[m], config.ci_level);
    if (point.h_min && !hmin_s.empty()) point.h_min->ci = percentile_interval(hmin_s, config.ci_level);
    return point;
}

}  // namespace

Interval percentile_interval(std::vector<double> sample, double level) {
    require(!sample.empty(), ErrorKind::insufficient_data, "empty bootstrap sample");
    std::sort(sample.begin(), sample.end());
    auto q = [&](double prob) {
        const double h = prob * static_cast<double>(sample.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, sample.size() - 1);
        return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
    };
    return Interval{q(0.5 * (1.0 - level)), q(0.5 * (1.0 + level)), level, static_cast<int>(sample.size())};
}

ScalingEstimate analyze_pyramid(const CoefficientPyramid& pyramid, const AnalysisBundle& bundle) {
    check_bundle(bundle);
    const Prepared p = prepare(pyramid, bundle);
    return estimate(p, gather(p, nullptr), bundle, nullptr);
}

ScalingEstimate analyze_pyramid(const LeaderPyramid& leaders, const AnalysisBundle& bundle) {
    check_bundle(bundle);
    const Prepared p = prepare(leaders, bundle);
    return estimate(p, gather(p, nullptr), bundle, nullptr);
}

ScalingEstimate bootstrap_ci(const CoefficientPyramid& pyramid, const AnalysisBundle& bundle,
                             const BootstrapConfig& config) {
    check_bundle(bundle);
    return run_bootstrap(prepare(pyramid, bundle), bundle, config);
}

ScalingEstimate bootstrap_ci(const LeaderPyramid& leaders, const AnalysisBundle& bundle,
                             const BootstrapConfig& config) {
    check_bundle(bundle);
    return run_bootstrap(prepare(leaders, bundle), bundle, config);
}

}  // namespace mfa
