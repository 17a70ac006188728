#include <algorithm>
#include <cmath>
#include <numbers>

#include "mfa/error.hpp"
#include "mfa/regression.hpp"
#include "mfa/scaling.hpp"

namespace mfa {

namespace {

void check_config(const RegressionConfig& config) {
    require(config.j1 < config.j2, ErrorKind::invalid_argument,
            "scale range needs j1 < j2, got " + std::to_string(config.j1) + ".." +
                std::to_string(config.j2));
    require(config.min_atoms >= 1, ErrorKind::invalid_argument, "min_atoms must be positive");
}

struct Series {
    std::vector<double> x, y, w;
};

LineFit fit_series(const Series& s, const std::string& what) {
    if (s.x.size() < 3)
        fail(ErrorKind::insufficient_scales,
             what + ": only " + std::to_string(s.x.size()) + " usable octaves in the scale range");
    return weighted_line_fit(s.x, s.y, s.w);
}

double weight(const RegressionConfig& config, std::size_t count) {
    return config.weighting == Weighting::count ? static_cast<double>(count) : 1.0;
}

std::string p_label(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "p=%g", p);
    return buf;
}

}  // namespace

std::string to_string(Weighting w) { return w == Weighting::count ? "count" : "uniform"; }

Weighting parse_weighting(const std::string& name) {
    if (name == "count") return Weighting::count;
    if (name == "uniform") return Weighting::uniform;
    fail(ErrorKind::invalid_argument, "unknown weighting '" + name + "'");
}

std::optional<double> ScalingEstimate::at(double p) const {
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        if (p_grid[i] == p) return values[i];
    return std::nullopt;
}

std::optional<Quantity> ScalingEstimate::quantity_at(double p) const {
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        if (p_grid[i] == p) {
            Quantity q{values[i], std::nullopt};
            if (i < value_ci.size()) q.ci = value_ci[i];
            return q;
        }
    return std::nullopt;
}

double ScalingEstimate::cumulant_expansion(double p) const {
    double s = 0.0, term = 1.0;
    for (std::size_t m = 0; m < cumulants.size(); ++m) {
        term *= p / static_cast<double>(m + 1);
        s += cumulants[m] * term;
    }
    return s;
}

ScalingEstimate fit_scaling_function(const StructureFunctionTable& table,
                                     const RegressionConfig& config) {
    check_config(config);
    ScalingEstimate est;
    est.source = table.source;
    est.dim = table.dim;
    est.integration_order = table.integration_order;
    est.j1 = config.j1;
    est.j2 = config.j2;
    est.p_grid = table.p_grid;
    est.values.resize(table.p_grid.size());
    est.intercepts.resize(table.p_grid.size());
    est.value_ci.resize(table.p_grid.size());
    est.warnings = table.warnings;

    for (std::size_t i = 0; i < table.p_grid.size(); ++i) {
        const double p = table.p_grid[i];
        Series s;
        for (std::size_t k = 0; k < table.scales.size(); ++k) {
            const int j = table.scales[k];
            if (j < config.j1 || j > config.j2) continue;
            const double v = table.log2_stat[i][k];
            if (!std::isfinite(v) || table.counts[k] < config.min_atoms) continue;
            s.x.push_back(j);
            s.y.push_back(v);
            s.w.push_back(weight(config, table.counts[k]));
        }
        const LineFit fit = fit_series(s, p_label(p));
        est.values[i] = fit.slope;
        est.intercepts[i] = fit.intercept;
    }

    if (table.max_cumulant() > 0) {
        const CumulantFit c = fit_log_cumulants(table, config);
        est.cumulants = c.c;
        est.cumulant_intercepts = c.intercepts;
        est.cumulant_ci.resize(c.c.size());
    }

    // Report, never repair, shape violations.
    std::vector<std::size_t> order(est.p_grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return est.p_grid[a] < est.p_grid[b]; });
    int concavity = 0, monotone = 0;
    for (std::size_t k = 1; k + 1 < order.size(); ++k) {
        const double p0 = est.p_grid[order[k - 1]], p1 = est.p_grid[order[k]], p2 = est.p_grid[order[k + 1]];
        const double z0 = est.values[order[k - 1]], z1 = est.values[order[k]], z2 = est.values[order[k + 1]];
        const double chord = z0 + (z2 - z0) * (p1 - p0) / (p2 - p0);
        if (z1 < chord - 1e-9) ++concavity;
    }
    if (table.source == Source::coefficients || table.source == Source::increments) {
        for (std::size_t k = 1; k < order.size(); ++k)
            if (est.p_grid[order[k - 1]] >= 0.0 && est.values[order[k]] < est.values[order[k - 1]] - 1e-9)
                ++monotone;
    }
    if (concavity > 0)
        est.warnings.push_back("scaling function not concave at " + std::to_string(concavity) + " grid points");
    if (monotone > 0)
        est.warnings.push_back("scaling function decreases at " + std::to_string(monotone) +
                               " grid points with p >= 0; check the scale range");
    return est;
}

CumulantFit fit_log_cumulants(const StructureFunctionTable& table, const RegressionConfig& config) {
    check_config(config);
    const int M = table.max_cumulant();
    require(M >= 1, ErrorKind::invalid_argument, "table carries no cumulants");
    CumulantFit out;
    for (int m = 0; m < M; ++m) {
        Series s;
        for (std::size_t k = 0; k < table.scales.size(); ++k) {
            const int j = table.scales[k];
            if (j < config.j1 || j > config.j2) continue;
            const double v = table.cumulants[static_cast<std::size_t>(m)][k];
            if (!std::isfinite(v) || table.counts[k] < std::max<std::size_t>(config.min_atoms, M + 1))
                continue;
            s.x.push_back(j * std::numbers::ln2);
            s.y.push_back(v);
            s.w.push_back(weight(config, table.counts[k]));
        }
        const LineFit fit = fit_series(s, "cumulant " + std::to_string(m + 1));
        out.c.push_back(fit.slope);
        out.intercepts.push_back(fit.intercept);
    }
    return out;
}

CumulantFit estimate_log_cumulants(const LeaderPyramid& leaders, int M, const RegressionConfig& config) {
    require(M >= 1 && M <= 4, ErrorKind::invalid_argument, "cumulant order must lie in [1, 4]");
    const double p0[] = {1.0};
    return fit_log_cumulants(structure_functions(leaders, p0, M), config);
}

HminEstimate hmin_from_atoms(std::span<const LevelAtoms> atoms, std::span<const std::size_t> counts,
                             const RegressionConfig& config) {
    check_config(config);
    require(atoms.size() == counts.size(), ErrorKind::internal, "atom and count lists differ");
    HminEstimate h;
    Series s;
    bool any_level = false;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const int j = atoms[k].j;
        if (j < config.j1 || j > config.j2) continue;
        double sup = 0.0;
        for (double v : atoms[k].values) sup = std::max(sup, std::abs(v));
        if (sup == 0.0) continue;
        any_level = true;
        if (counts[k] < config.min_atoms) continue;
        h.scales.push_back(j);
        h.log2_sup.push_back(std::log2(sup));
        s.x.push_back(j);
        s.y.push_back(std::log2(sup));
        s.w.push_back(weight(config, counts[k]));
    }
    require(any_level, ErrorKind::degenerate_input, "every octave in range has only zero coefficients");
    const LineFit fit = fit_series(s, "h_min");
    h.value = fit.slope;
    h.intercept = fit.intercept;
    return h;
}

HminEstimate estimate_hmin(const CoefficientPyramid& pyramid, const RegressionConfig& config) {
    const auto atoms = atoms_of(pyramid);
    std::vector<std::size_t> counts;
    for (const PyramidLevel& lv : pyramid.levels()) counts.push_back(lv.valid_count());
    return hmin_from_atoms(atoms, counts, config);
}

}  // namespace mfa
