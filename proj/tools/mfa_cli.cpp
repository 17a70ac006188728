#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "mfa/error.hpp"
#include "mfa/geometry.hpp"
#include "mfa/io.hpp"
#include "mfa/pipeline.hpp"
#include "mfa/synth.hpp"

using nlohmann::json;
using namespace mfa;

namespace {

// "a:b:step" or a comma separated list.
std::vector<double> parse_p_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(text);
        std::string f;
        while (std::getline(ss, f, ':')) parts.push_back(std::stod(f));
        require(parts.size() == 3 && parts[2] > 0 && parts[1] >= parts[0], ErrorKind::invalid_argument,
                "p range must be MIN:MAX:STEP with STEP > 0");
        const auto steps = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
        for (long k = 0; k <= steps; ++k) out.push_back(parts[0] + static_cast<double>(k) * parts[2]);
        return out;
    }
    std::stringstream ss(text);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(std::stod(f));
    require(!out.empty(), ErrorKind::invalid_argument, "empty p grid");
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path);
    require(static_cast<bool>(f), ErrorKind::io, "cannot write " + path.string());
    f << text;
}

json sample_truth(const GroundTruth& t) {
    json z = json::array(), s = json::array();
    for (int k = -20; k <= 20; ++k) {
        const double p = 0.25 * k;
        z.push_back({p, t.zeta(p)});
    }
    for (int k = 0; k <= 300; ++k) {
        const double h = 0.01 * k;
        const double d = t.spectrum(h);
        if (std::isfinite(d)) s.push_back({h, d});
    }
    json j = {{"dim", t.dim}, {"description", t.description}, {"zeta", z}, {"spectrum", s}};
    j["hmin"] = t.hmin ? json(*t.hmin) : json(nullptr);
    return j;
}

struct AnalyzeOptions {
    std::string input;
    std::string format;
    std::string shape;
    std::string fracint = "auto";
    std::string p_grid = "-4:4:0.25";
    std::string weighting = "count";
    std::string boundary = "discard";
    std::string out_dir = ".";
    std::string export_pyramid;
    std::string write_config;
    std::string config_file;
    PipelineConfig config;
};

void add_analysis_options(CLI::App* app, AnalyzeOptions& o) {
    app->add_option("--config", o.config_file, "read options from a key = value file; the command line wins");
    app->add_option("-i,--input", o.input, "input file, '-' for stdin")->required();
    app->add_option("--format", o.format, "csv, f64, f32, pgm or pbm (default: from the extension)");
    app->add_option("--shape", o.shape, "ROWSxCOLS for raw 2D input");
    app->add_option("--order", o.config.filter_order, "Daubechies filter order")->capture_default_str();
    app->add_option("--boundary", o.boundary, "discard or periodic")->capture_default_str();
    app->add_option("--fracint", o.fracint, "auto, off, or a fixed order")->capture_default_str();
    app->add_option("--p", o.p_grid, "p grid, MIN:MAX:STEP or a list (0, 1, 2 always added)")->capture_default_str();
    app->add_option("--j1", o.config.regression.j1, "finest octave of the fit")->required();
    app->add_option("--j2", o.config.regression.j2, "coarsest octave of the fit")->required();
    app->add_option("--weighting", o.weighting, "count or uniform")->capture_default_str();
    app->add_option("--min-atoms", o.config.regression.min_atoms, "atoms needed for an octave to enter a fit")
        ->capture_default_str();
    app->add_option("--cumulants", o.config.cumulants, "number of log-cumulants (0..4)")->capture_default_str();
    app->add_option("--B", o.config.boot.B, "bootstrap resamples")->capture_default_str();
    app->add_option("--block", o.config.boot.block_length, "finest block length (0: twice the filter length)")
        ->capture_default_str();
    app->add_option("--ci-level", o.config.boot.ci_level, "confidence level")->capture_default_str();
    app->add_option("--seed", o.config.boot.seed, "bootstrap seed")->capture_default_str();
    app->add_option("--window", o.config.window, "sliding window length (1D)")->capture_default_str();
    app->add_option("--hop", o.config.hop, "sliding window hop (default: the window length)")->capture_default_str();
    app->add_option("--h-points", o.config.h_points, "Legendre h grid size")->capture_default_str();
    app->add_option("-o,--out-dir", o.out_dir, "output directory, '-' prints result.json to stdout")
        ->capture_default_str();
    app->add_option("--export-pyramid", o.export_pyramid, "directory for the coefficient and leader pyramids");
    app->add_option("--write-config", o.write_config, "write the effective options to a config file");
}

void finish_config(AnalyzeOptions& o) {
    PipelineConfig& c = o.config;
    c.boundary = parse_boundary(o.boundary);
    c.regression.weighting = parse_weighting(o.weighting);
    try {
        c.p_grid = parse_p_grid(o.p_grid);
    } catch (const std::logic_error&) {
        fail(ErrorKind::invalid_argument, "cannot parse p grid '" + o.p_grid + "'");
    }
    if (o.fracint == "auto") {
        c.fracint = FracintMode::automatic;
    } else if (o.fracint == "off") {
        c.fracint = FracintMode::off;
    } else {
        c.fracint = FracintMode::fixed;
        try {
            c.fracint_order = std::stod(o.fracint);
        } catch (const std::exception&) {
            fail(ErrorKind::invalid_argument, "--fracint expects auto, off or a number");
        }
    }
}

int run_analyze(const CLI::App& sub, AnalyzeOptions& o) {
    finish_config(o);
    if (!o.write_config.empty()) {
        std::istringstream all(sub.config_to_str(true, false));
        std::string text, line;
        while (std::getline(all, line))
            if (line.rfind("write-config", 0) != 0 && line.rfind("config", 0) != 0) text += line + "\n";
        write_text(o.write_config, text);
    }
    std::optional<Format> fmt;
    if (!o.format.empty()) fmt = parse_format(o.format);
    std::optional<Shape> shape;
    if (!o.shape.empty()) shape = parse_shape(o.shape);
    const Signal signal = read_signal(o.input, fmt, shape);

    if (!o.export_pyramid.empty()) {
        const auto pyr = dwt_forward(signal, design_daubechies_filter(o.config.filter_order),
                                     max_admissible_level(signal), o.config.boundary);
        const auto lead = compute_leaders(pyr);
        export_pyramid(o.export_pyramid, pyr, &lead);
    }

    const PipelineResult r = run_pipeline(signal, o.config);
    const std::string text = r.document.dump(2) + "\n";
    if (o.out_dir == "-") {
        std::cout << text;
    } else {
        const std::filesystem::path dir(o.out_dir);
        std::filesystem::create_directories(dir);
        write_text(dir / "result.json", text);
        if (r.document.contains("result") && r.document["result"]["status"] == "ok") {
            const json& rec = r.document["result"];
            write_text(dir / "zeta.csv", zeta_csv(rec));
            write_text(dir / "spectrum.csv", spectrum_csv(rec));
            write_text(dir / "cumulants.csv", cumulants_csv(rec));
        }
    }
    if (r.failure) {
        std::cerr << "mfa: " << r.failed_stage << " failed: " << r.failure->what() << '\n';
        return exit_code(r.failure->kind());
    }
    return 0;
}

struct SynthOptions {
    std::string kind;
    double H = 0.7;
    int log2n = 14;
    int dim = 1;
    double a = 2.0;
    std::string variant = "sin";
    int depth = 14;
    double c1 = 0.72, c2 = -0.08;
    double lambda = 2.0 * std::log(2.0), beta = 2.0 / 3.0;
    double p0 = 0.6;
    double alpha = 1.0 / 0.7;
    int resolution = 10;
    std::string fill = "filled";
    std::uint64_t seed = 0, stream = 0;
    std::string out = "-";
    std::string truth;
};

int run_synth(const SynthOptions& o) {
    const std::size_t n = std::size_t{1} << o.log2n;
    std::optional<Synthesized> s;
    json params = {{"kind", o.kind}, {"seed", o.seed}, {"stream", o.stream}};
    if (o.kind == "vonkoch") {
        const auto g = rasterize_von_koch(o.depth, o.resolution, o.fill == "boundary" ? KochFill::boundary : KochFill::filled);
        const Format f = o.out == "-" ? Format::pbm : infer_format(o.out);
        write_grid(o.out, g, f == Format::csv ? Format::pbm : f);
        return 0;
    }
    if (o.kind == "fbm") {
        s = Synthesized{synth_fbm(o.H, n, o.dim, o.seed, o.stream), fbm_truth(o.H, o.dim)};
        params["H"] = o.H;
    } else if (o.kind == "weierstrass") {
        const auto v = o.variant == "cos" ? WeierstrassVariant::cos_renorm : WeierstrassVariant::sin;
        GroundTruth t = fbm_truth(o.H, 1);
        t.description = "Weierstrass-Mandelbrot function, monofractal";
        s = Synthesized{synth_weierstrass(o.a, o.H, n, v), t};
        params["a"] = o.a;
        params["H"] = o.H;
    } else if (o.kind == "lognormal") {
        const auto cal = calibrate_lognormal(o.c1, o.c2);
        s = synth_cascade({2, o.depth, MultiplierLaw::lognormal(cal.sigma2)}, o.seed, o.stream);
        params["sigma2"] = cal.sigma2;
        params["suggested_fracint"] = cal.integration;
    } else if (o.kind == "logpoisson") {
        s = synth_cascade({2, o.depth, MultiplierLaw::logpoisson(o.lambda, o.beta)}, o.seed, o.stream);
    } else if (o.kind == "binomial") {
        s = synth_cascade({2, o.depth, MultiplierLaw::deterministic({o.p0, 1.0 - o.p0})}, o.seed, o.stream);
    } else if (o.kind == "mftime") {
        const auto cal = calibrate_lognormal(o.c1, o.c2);
        s = synth_fbm_mf_time(o.H, {2, o.depth, MultiplierLaw::lognormal(cal.sigma2)}, n, o.seed, o.stream);
    } else if (o.kind == "levy") {
        s = synth_levy_stable(o.alpha, n, o.seed, o.stream);
        params["alpha"] = o.alpha;
    } else if (o.kind == "squared-fbm") {
        s = Synthesized{transform_square(synth_fbm(o.H, n, 1, o.seed, o.stream)), squared_fbm_truth(o.H)};
    } else {
        fail(ErrorKind::invalid_argument, "unknown kind '" + o.kind + "'");
    }
    write_signal(o.out, s->signal);
    std::string truth = o.truth;
    if (truth.empty() && o.out != "-") truth = o.out + ".truth.json";
    if (!truth.empty()) {
        json t = sample_truth(s->truth);
        t["params"] = params;
        t["schema_version"] = kSchemaVersion;
        write_text(truth, t.dump(2) + "\n");
    }
    return 0;
}

// CLI11 only reads config files on the top-level app, so the file named by a
// subcommand's --config is spliced into the arguments instead. Keys already
// given on the command line are left alone.
std::vector<std::string> expand_config(const CLI::App& app, int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string file;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) file = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) file = args[i].substr(9);
    }
    if (file.empty()) return args;
    std::ifstream in(file);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open config " + file);
    const CLI::App* sub = app.get_subcommand_no_throw(args.size() > 1 ? args[1] : "");
    require(sub != nullptr, ErrorKind::invalid_argument, "--config follows a subcommand");
    const auto given = [&](const std::string& flag) {
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (!opt) return false;
        std::vector<std::string> names;
        for (const auto& n : opt->get_lnames()) names.push_back("--" + n);
        for (const auto& n : opt->get_snames()) names.push_back("-" + n);
        return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return std::any_of(names.begin(), names.end(),
                               [&](const std::string& n) { return a == n || a.rfind(n + "=", 0) == 0; });
        });
    };
    std::vector<std::string> extra;
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_config(in)) {
        const std::string flag = (sub->get_option_no_throw("--" + item.name) ? "--" : "-") + item.name;
        if (item.inputs.empty() || item.inputs.front().empty() || given(flag)) continue;
        extra.push_back(flag + "=" + item.inputs.front());
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wavelet-leader multifractal analysis"};
    app.require_subcommand(1);

    SynthOptions so;
    auto* synth = app.add_subcommand("synth", "generate a test signal and its ground truth");
    synth->add_option("--kind", so.kind,
                      "fbm, weierstrass, lognormal, logpoisson, binomial, mftime, levy, squared-fbm, vonkoch")
        ->required();
    synth->add_option("--H", so.H, "self-similarity or Holder index")->capture_default_str();
    synth->add_option("--log2n", so.log2n, "log2 of the number of samples per axis")->capture_default_str();
    synth->add_option("--dim", so.dim, "1 or 2 (fbm)")->capture_default_str();
    synth->add_option("--a", so.a, "Weierstrass ratio")->capture_default_str();
    synth->add_option("--variant", so.variant, "Weierstrass variant: sin or cos")->capture_default_str();
    synth->add_option("--depth", so.depth, "cascade or snowflake depth")->capture_default_str();
    synth->add_option("--c1", so.c1, "lognormal target c1")->capture_default_str();
    synth->add_option("--c2", so.c2, "lognormal target c2")->capture_default_str();
    synth->add_option("--lambda", so.lambda, "log-Poisson intensity")->capture_default_str();
    synth->add_option("--beta", so.beta, "log-Poisson factor")->capture_default_str();
    synth->add_option("--p0", so.p0, "binomial left weight")->capture_default_str();
    synth->add_option("--alpha", so.alpha, "stable index")->capture_default_str();
    synth->add_option("--resolution", so.resolution, "snowflake raster: log2 of the side")->capture_default_str();
    synth->add_option("--fill", so.fill, "snowflake: filled or boundary")->capture_default_str();
    synth->add_option("--seed", so.seed)->capture_default_str();
    synth->add_option("--stream", so.stream)->capture_default_str();
    synth->add_option("-o,--out", so.out, "output file (.csv, .f64, .f32, .pgm; .pbm for vonkoch), '-' for stdout")
        ->capture_default_str();
    synth->add_option("--truth", so.truth, "ground-truth JSON (default: OUT.truth.json)");

    AnalyzeOptions ao;
    auto* analyze = app.add_subcommand("analyze", "run the analysis pipeline");
    add_analysis_options(analyze, ao);
    analyze->add_flag("--bootstrap", ao.config.bootstrap, "add bootstrap confidence intervals");

    AnalyzeOptions bo;
    bo.config.bootstrap = true;
    auto* boot = app.add_subcommand("bootstrap", "run the analysis pipeline with bootstrap intervals");
    add_analysis_options(boot, bo);

    std::string grid_in, grid_fmt, grid_shape, grid_weight = "count", grid_out = "-";
    int gj1 = 1, gj2 = 8;
    bool graph = false;
    auto* boxdim = app.add_subcommand("boxdim", "box dimension of a binary image, or graph dimension of a signal");
    boxdim->add_option("-i,--input", grid_in, "image or signal file")->required();
    boxdim->add_option("--format", grid_fmt);
    boxdim->add_option("--shape", grid_shape);
    boxdim->add_option("--j1", gj1)->capture_default_str();
    boxdim->add_option("--j2", gj2)->capture_default_str();
    boxdim->add_option("--weighting", grid_weight)->capture_default_str();
    boxdim->add_flag("--graph", graph, "graph dimension of a 1D signal from oscillations and leaders");
    boxdim->add_option("-o,--out", grid_out, "JSON output, '-' for stdout")->capture_default_str();

    std::string report_in, report_csv;
    auto* report = app.add_subcommand("report", "summarize a result.json");
    report->add_option("result", report_in, "result.json")->required();
    report->add_option("--csv-dir", report_csv, "write zeta.csv, spectrum.csv and cumulants.csv here");

    try {
        std::vector<std::string> args;
        try {
            args = expand_config(app, argc, argv);
        } catch (const Error& e) {
            std::cerr << "mfa: " << e.what() << '\n';
            return exit_code(e.kind());
        }
        std::vector<char*> ptrs;
        for (auto& a : args) ptrs.push_back(a.data());
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*synth) return run_synth(so);
        if (*analyze) return run_analyze(*analyze, ao);
        if (*boot) return run_analyze(*boot, bo);
        if (*boxdim) {
            std::optional<Format> f;
            if (!grid_fmt.empty()) f = parse_format(grid_fmt);
            std::optional<Shape> sh;
            if (!grid_shape.empty()) sh = parse_shape(grid_shape);
            RegressionConfig reg;
            reg.j1 = gj1;
            reg.j2 = gj2;
            reg.weighting = parse_weighting(grid_weight);
            json out = {{"schema_version", kSchemaVersion}, {"input", grid_in}, {"j1", gj1}, {"j2", gj2}};
            if (graph) {
                const auto gd = graph_dimension_from_oscillation(read_signal(grid_in, f, sh), reg);
                out["graph_dimension"] = {{"oscillation_based", gd.oscillation_based},
                                          {"leader_based", gd.leader_based},
                                          {"O1", gd.O1},
                                          {"zeta1", gd.zeta1},
                                          {"oscillation_order", gd.oscillation_order},
                                          {"degenerate", gd.degenerate},
                                          {"warnings", gd.warnings}};
            } else {
                reg.min_atoms = 1;
                const auto bc = box_dimension(read_grid(grid_in, f, sh), reg);
                out["box_dimension"] = {{"dimension", bc.dimension}, {"scales", bc.scales}, {"counts", bc.counts}};
            }
            if (grid_out == "-")
                std::cout << out.dump(2) << '\n';
            else
                write_text(grid_out, out.dump(2) + "\n");
            return 0;
        }
        if (*report) {
            std::ifstream f(report_in);
            require(static_cast<bool>(f), ErrorKind::io, "cannot open " + report_in);
            json doc;
            try {
                doc = json::parse(f);
            } catch (const json::exception& e) {
                fail(ErrorKind::invalid_data, std::string("not a result document: ") + e.what());
            }
            require(doc.value("schema_version", 0) == kSchemaVersion, ErrorKind::invalid_data,
                    "unsupported schema_version");
            std::vector<json> records;
            if (doc.contains("result")) records.push_back(doc["result"]);
            if (doc.contains("windows"))
                for (const auto& w : doc["windows"]) records.push_back(w);
            for (const auto& rec : records) {
                if (rec.contains("offset")) std::cout << "window at " << rec["offset"] << ":\n";
                if (rec["status"] != "ok") {
                    std::cout << "  failed in " << rec["failure"]["stage"].get<std::string>() << ": "
                              << rec["failure"]["message"].get<std::string>() << '\n';
                    continue;
                }
                std::cout << "  h_min " << rec["hmin"]["value"] << ", integration order " << rec["fracint"]["order"] << '\n';
                std::cout << "  log-cumulants " << rec["cumulants"]["c"] << '\n';
                std::cout << "  1 - eta(1) " << rec["dimension"]["one_minus_eta1"] << ", d - eta(1) "
                          << rec["dimension"]["d_minus_eta1"] << '\n';
                for (const auto& [k, v] : rec["verdicts"].items())
                    if (v.is_string()) std::cout << "  " << k << ": " << v.get<std::string>() << '\n';
                for (const auto& w : rec["warnings"]) std::cout << "  warning: " << w.get<std::string>() << '\n';
            }
            if (!report_csv.empty() && doc.contains("result") && doc["result"]["status"] == "ok") {
                std::filesystem::create_directories(report_csv);
                const std::filesystem::path d(report_csv);
                write_text(d / "zeta.csv", zeta_csv(doc["result"]));
                write_text(d / "spectrum.csv", spectrum_csv(doc["result"]));
                write_text(d / "cumulants.csv", cumulants_csv(doc["result"]));
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "mfa: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "mfa: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
