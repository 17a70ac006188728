#include "mfa/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <sstream>

#include "mfa/fracint.hpp"
#include "mfa/leaders.hpp"
#include "mfa/parallel.hpp"

namespace mfa {

using nlohmann::json;

namespace {

struct StageFailure {
    std::string stage;
    Error error;
};

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw StageFailure{name, e};
    } catch (const std::exception& e) {
        throw StageFailure{name, Error(ErrorKind::internal, e.what())};
    }
}

json cis_to_json(const std::vector<std::optional<Interval>>& cis) {
    json a = json::array();
    for (const auto& ci : cis) a.push_back(to_json(ci));
    return a;
}

Interval shifted(Interval ci, double by) {
    ci.lo += by;
    ci.hi += by;
    return ci;
}

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt(double v) {
    if (!std::isfinite(v)) return "nan";
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

std::string fmt(const json& v) { return v.is_number() ? fmt(v.get<double>()) : std::string("nan"); }

}  // namespace

std::string to_string(FracintMode m) {
    switch (m) {
        case FracintMode::automatic: return "auto";
        case FracintMode::fixed: return "fixed";
        case FracintMode::off: return "off";
    }
    return "?";
}

std::vector<double> effective_p_grid(const std::vector<double>& p_grid) {
    std::vector<double> g = p_grid;
    g.insert(g.end(), {0.0, 1.0, 2.0});
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

json to_json(const Interval& ci) {
    return {{"lo", ci.lo}, {"hi", ci.hi}, {"level", ci.level}, {"B", ci.resamples}};
}

json to_json(const std::optional<Interval>& ci) { return ci ? to_json(*ci) : json(nullptr); }

json to_json(const PipelineConfig& c) {
    return {{"filter_order", c.filter_order},
            {"boundary", to_string(c.boundary)},
            {"fracint", to_string(c.fracint)},
            {"fracint_order", c.fracint_order},
            {"p_grid", effective_p_grid(c.p_grid)},
            {"j1", c.regression.j1},
            {"j2", c.regression.j2},
            {"weighting", to_string(c.regression.weighting)},
            {"min_atoms", c.regression.min_atoms},
            {"cumulants", c.cumulants},
            {"bootstrap", c.bootstrap},
            {"B", c.boot.B},
            {"block_length", c.boot.block_length},
            {"min_block", c.boot.min_block},
            {"ci_level", c.boot.ci_level},
            {"seed", c.boot.seed},
            {"window", c.window},
            {"hop", c.hop},
            {"h_points", c.h_points}};
}

PipelineResult analyze_signal(const Signal& signal, const PipelineConfig& config) {
    PipelineResult out;
    json& rec = out.document;
    rec = json::object();
    rec["status"] = "ok";
    std::vector<std::string> warnings;
    try {
        stage("ingest", [&] {
            require(!signal.empty(), ErrorKind::invalid_data, "empty signal");
            signal.require_finite();
            rec["input"] = {{"dim", signal.dim()}, {"rows", signal.rows()}, {"cols", signal.cols()}, {"n", signal.size()}};
            // Every detail of a constant is zero up to rounding; the rounding would
            // otherwise pass for a scaling law.
            const auto [lo, hi] = std::minmax_element(signal.samples().begin(), signal.samples().end());
            require(*lo != *hi, ErrorKind::degenerate_input, "constant signal has no wavelet details");
        });
        const std::vector<double> grid = effective_p_grid(config.p_grid);
        const RegressionConfig& reg = config.regression;

        const WaveletFilter filter = stage("dwt", [&] { return design_daubechies_filter(config.filter_order); });
        const CoefficientPyramid pyr = stage("dwt", [&] {
            const int top = max_admissible_level(signal);
            require(reg.j1 >= 1 && reg.j2 <= top, ErrorKind::invalid_argument,
                    "scale range " + std::to_string(reg.j1) + ".." + std::to_string(reg.j2) +
                        " outside the admissible octaves 1.." + std::to_string(top));
            return dwt_forward(signal, filter, top, config.boundary);
        });
        rec["transform"] = {{"filter_order", config.filter_order},
                            {"boundary", to_string(config.boundary)},
                            {"levels", pyr.num_levels()}};

        const HminEstimate hmin = stage("hmin", [&] { return estimate_hmin(pyr, reg); });
        rec["hmin"] = {{"value", hmin.value}, {"ci", nullptr}, {"scales", hmin.scales}, {"log2_sup", hmin.log2_sup}};

        double s = 0.0;
        const CoefficientPyramid ipyr = stage("fracint", [&] {
            if (config.fracint == FracintMode::fixed) s = config.fracint_order;
            if (config.fracint == FracintMode::automatic) {
                const double h[] = {hmin.value};
                s = select_integration_order(h);
            }
            return s != 0.0 ? pseudo_fractional_integrate(pyr, s) : pyr;
        });
        rec["fracint"] = {{"mode", to_string(config.fracint)}, {"order", s}};
        for (const auto& w : ipyr.warnings) warnings.push_back(w);

        const LeaderPyramid leaders = stage("leaders", [&] { return compute_leaders(ipyr); });

        std::vector<double> pos_grid;
        for (double p : grid)
            if (p >= 0.0) pos_grid.push_back(p);
        const auto ltable = stage("structure", [&] { return structure_functions(leaders, grid, config.cumulants); });
        const auto ctable = stage("structure", [&] { return structure_functions(pyr, pos_grid); });

        ScalingEstimate zeta = stage("fit", [&] { return fit_scaling_function(ltable, reg); });
        ScalingEstimate eta = stage("fit", [&] { return fit_scaling_function(ctable, reg); });
        eta.h_min = Quantity{hmin.value, std::nullopt};
        for (const auto& w : zeta.warnings) warnings.push_back("leaders: " + w);
        for (const auto& w : eta.warnings) warnings.push_back("coefficients: " + w);

        if (config.bootstrap) {
            stage("bootstrap", [&] {
                AnalysisBundle lb;
                lb.source = Source::leaders;
                lb.p_grid = grid;
                lb.cumulant_order = config.cumulants;
                lb.regression = reg;
                const ScalingEstimate bz = bootstrap_ci(ipyr, lb, config.boot);
                zeta.value_ci = bz.value_ci;
                zeta.cumulant_ci = bz.cumulant_ci;
                // h_min of the integrated pyramid is shifted by s.
                if (bz.h_min && bz.h_min->ci) eta.h_min->ci = shifted(*bz.h_min->ci, -s);
                AnalysisBundle cb;
                cb.source = Source::coefficients;
                cb.p_grid = pos_grid;
                cb.hmin = false;
                cb.regression = reg;
                eta.value_ci = bootstrap_ci(pyr, cb, config.boot).value_ci;
                for (const auto& w : bz.warnings)
                    if (w.find("bootstrap") != std::string::npos) warnings.push_back(w);
            });
        }
        rec["hmin"]["ci"] = to_json(eta.h_min->ci);

        rec["leaders"] = {{"j1", reg.j1},
                          {"j2", reg.j2},
                          {"integration_order", zeta.integration_order},
                          {"p_grid", zeta.p_grid},
                          {"zeta", zeta.values},
                          {"zeta_ci", cis_to_json(zeta.value_ci)},
                          {"intercepts", zeta.intercepts},
                          {"scales", ltable.scales},
                          {"counts", ltable.counts},
                          {"log2S", ltable.log2_stat}};
        rec["coefficients"] = {{"p_grid", eta.p_grid},
                               {"eta", eta.values},
                               {"eta_ci", cis_to_json(eta.value_ci)},
                               {"scales", ctable.scales},
                               {"counts", ctable.counts},
                               {"log2S", ctable.log2_stat}};
        rec["cumulants"] = {{"c", zeta.cumulants}, {"ci", cis_to_json(zeta.cumulant_ci)}};

        const LegendreSpectrum spec = stage("legendre", [&] {
            return legendre_spectrum(zeta, default_h_grid(zeta, config.h_points));
        });
        json neg = json::array();
        for (auto v : spec.negative) neg.push_back(v != 0);
        rec["spectrum"] = {{"integration_order", s},
                           {"h", spec.h},
                           {"L", spec.L},
                           {"argmin_p", spec.argmin_p},
                           {"negative", neg},
                           {"h_lo", spec.h_lo ? json(*spec.h_lo) : json(nullptr)},
                           {"h_hi", spec.h_hi ? json(*spec.h_hi) : json(nullptr)}};
        for (const auto& w : spec.warnings) warnings.push_back("legendre: " + w);

        const MembershipReport m = stage("membership", [&] {
            // Memberships concern the data itself, so undo the integration on zeta.
            ScalingEstimate zf = zeta;
            for (std::size_t i = 0; i < zf.p_grid.size(); ++i) {
                zf.values[i] -= s * zf.p_grid[i];
                if (zf.value_ci[i]) zf.value_ci[i] = shifted(*zf.value_ci[i], -s * zf.p_grid[i]);
            }
            return membership_tests(eta, zf);
        });
        rec["verdicts"] = {{"in_BV", to_string(m.in_BV)},
                           {"in_L2", to_string(m.in_L2)},
                           {"bounded_quadratic_variation", to_string(m.bounded_quadratic_variation)},
                           {"locally_bounded", to_string(m.locally_bounded)},
                           {"notes", m.notes}};

        const double eta1 = *eta.at(1.0);
        rec["dimension"] = {{"one_minus_eta1", 1.0 - eta1}, {"d_minus_eta1", signal.dim() - eta1}};
        try {
            const SubordinationResult sub = infer_subordination_H(eta);
            rec["subordination"] = {{"H", sub.H}, {"p_root", sub.p_root}, {"H_lo", sub.H_lo}, {"H_hi", sub.H_hi}};
        } catch (const Error& e) {
            rec["subordination"] = nullptr;
            warnings.push_back(std::string("subordination: ") + e.what());
        }
    } catch (const StageFailure& f) {
        rec["status"] = "failed";
        rec["failure"] = {{"stage", f.stage}, {"kind", std::string(to_string(f.error.kind()))}, {"message", f.error.what()}};
        out.failure = f.error;
        out.failed_stage = f.stage;
    }
    rec["warnings"] = warnings;
    return out;
}

PipelineResult run_pipeline(const Signal& signal, const PipelineConfig& config) {
    PipelineResult out;
    json& doc = out.document;
    doc["schema_version"] = kSchemaVersion;
    doc["timestamp"] = timestamp_now();
    doc["config"] = to_json(config);
    if (config.window == 0) {
        PipelineResult r = analyze_signal(signal, config);
        doc["status"] = r.document["status"];
        doc["result"] = std::move(r.document);
        out.failure = r.failure;
        out.failed_stage = r.failed_stage;
        return out;
    }
    try {
        require(signal.dim() == 1, ErrorKind::invalid_argument, "sliding windows need a 1D signal");
        require(config.window <= signal.size(), ErrorKind::invalid_argument,
                "window longer than the signal (" + std::to_string(signal.size()) + " samples)");
    } catch (const Error& e) {
        doc["status"] = "failed";
        doc["failure"] = {{"stage", "windows"}, {"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        out.failure = e;
        out.failed_stage = "windows";
        return out;
    }
    const std::size_t hop = config.hop > 0 ? config.hop : config.window;
    doc["windows"] = json::array();
    std::vector<std::size_t> offsets;
    for (std::size_t off = 0; off + config.window <= signal.size(); off += hop) offsets.push_back(off);
    std::vector<PipelineResult> records(offsets.size());
    parallel_for(offsets.size(), [&](std::size_t i) {
        records[i] = analyze_signal(signal.window(offsets[i], config.window), config);
    });
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        PipelineResult& r = records[i];
        r.document["offset"] = offsets[i];
        r.document["length"] = config.window;
        if (r.failure && !out.failure) {
            out.failure = r.failure;
            out.failed_stage = r.failed_stage;
        }
        doc["windows"].push_back(std::move(r.document));
    }
    doc["status"] = out.failure ? "failed" : "ok";
    return out;
}

json without_timestamp(json document) {
    document.erase("timestamp");
    return document;
}

std::string zeta_csv(const json& rec) {
    std::ostringstream s;
    s << "p,zeta,zeta_lo,zeta_hi,eta\n";
    const auto& L = rec.at("leaders");
    const auto& C = rec.at("coefficients");
    for (std::size_t i = 0; i < L.at("p_grid").size(); ++i) {
        const double p = L["p_grid"][i].get<double>();
        std::string eta = "nan";
        for (std::size_t k = 0; k < C.at("p_grid").size(); ++k)
            if (C["p_grid"][k].get<double>() == p) eta = fmt(C["eta"][k]);
        const auto& ci = L["zeta_ci"][i];
        s << fmt(p) << ',' << fmt(L["zeta"][i]) << ',' << (ci.is_null() ? "nan" : fmt(ci["lo"])) << ','
          << (ci.is_null() ? "nan" : fmt(ci["hi"])) << ',' << eta << '\n';
    }
    return s.str();
}

std::string spectrum_csv(const json& rec) {
    std::ostringstream s;
    s << "h,L\n";
    const auto& sp = rec.at("spectrum");
    for (std::size_t i = 0; i < sp.at("h").size(); ++i) s << fmt(sp["h"][i]) << ',' << fmt(sp["L"][i]) << '\n';
    return s.str();
}

std::string cumulants_csv(const json& rec) {
    std::ostringstream s;
    s << "m,c,lo,hi\n";
    const auto& c = rec.at("cumulants");
    for (std::size_t i = 0; i < c.at("c").size(); ++i) {
        const auto& ci = c["ci"][i];
        s << i + 1 << ',' << fmt(c["c"][i]) << ',' << (ci.is_null() ? "nan" : fmt(ci["lo"])) << ','
          << (ci.is_null() ? "nan" : fmt(ci["hi"])) << '\n';
    }
    return s.str();
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument: return 2;
        case ErrorKind::invalid_data:
        case ErrorKind::insufficient_data:
        case ErrorKind::io: return 3;
        case ErrorKind::insufficient_scales:
        case ErrorKind::degenerate_input:
        case ErrorKind::degenerate_leader:
        case ErrorKind::no_root:
        case ErrorKind::incomplete_report: return 4;
        case ErrorKind::internal: return 1;
    }
    return 1;
}

}  // namespace mfa
