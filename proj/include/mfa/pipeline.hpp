#pragma once

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mfa/bootstrap.hpp"
#include "mfa/dwt.hpp"
#include "mfa/error.hpp"
#include "mfa/scaling.hpp"
#include "mfa/signal.hpp"

namespace mfa {

inline constexpr int kSchemaVersion = 1;

enum class FracintMode { automatic, fixed, off };

std::string to_string(FracintMode m);

struct PipelineConfig {
    int filter_order = 3;
    Boundary boundary = Boundary::discard;
    FracintMode fracint = FracintMode::automatic;
    double fracint_order = 0.0;  // used when fracint == fixed
    std::vector<double> p_grid;  // 0, 1 and 2 are always added
    RegressionConfig regression;
    int cumulants = 3;
    bool bootstrap = false;
    BootstrapConfig boot;
    std::size_t window = 0;  // 1D sliding analysis when > 0
    std::size_t hop = 0;     // defaults to the window length
    std::size_t h_points = 201;
};

// p grid actually analysed: the configured one plus 0, 1, 2, sorted, unique.
std::vector<double> effective_p_grid(const std::vector<double>& p_grid);

nlohmann::json to_json(const PipelineConfig& config);
nlohmann::json to_json(const Interval& ci);
nlohmann::json to_json(const std::optional<Interval>& ci);

struct PipelineResult {
    nlohmann::json document;
    // First failure, with the stage it happened in. The document then holds the
    // partial results and a failure marker.
    std::optional<Error> failure;
    std::string failed_stage;
};

// One record: transform, h_min, optional integration, leaders, structure
// functions, fits, cumulants, Legendre spectrum, memberships, optional bootstrap.
PipelineResult analyze_signal(const Signal& signal, const PipelineConfig& config);

// Whole document: schema_version, timestamp, config, and either the single
// record under "result" or one record per window under "windows".
PipelineResult run_pipeline(const Signal& signal, const PipelineConfig& config);

// The document without its timestamp, for determinism comparisons.
nlohmann::json without_timestamp(nlohmann::json document);

// CSV projections of a single-record document.
std::string zeta_csv(const nlohmann::json& record);
std::string spectrum_csv(const nlohmann::json& record);
std::string cumulants_csv(const nlohmann::json& record);

// Process exit code for an error kind: 2 configuration, 3 data, 4 numeric
// degeneracy, 1 anything else.
int exit_code(ErrorKind kind);

}  // namespace mfa
