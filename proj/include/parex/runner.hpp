#pragma once

// Executes a RunConfig: one command, artifacts written to the output
// directory, one summary line per result on `log`.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "parex/config.hpp"
#include "parex/dynamics.hpp"
#include "parex/io.hpp"

namespace parex {

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> summary;
};

Provenance provenance_of(const RunConfig& config);

/// Canonical config as a JSON object of key -> value strings.
Json config_json(const RunConfig& config);

/// Trajectory for the configured model. Mathieu parameters fall back to
/// the scenario (drive amplitude, grating frequency, effective damping).
Trajectory simulate_configured(const RunConfig& config);

struct SweepRow {
    double value = 0.0;
    double omega_pp_measured = 0.0;  // fitted rate plus the model damping
    double omega_pp_formula = 0.0;
    double net_measured = 0.0;
    double net_formula = 0.0;
    double threshold_lhs = 0.0;
    double r_squared = 0.0;
};

/// Evaluates every sweep cell on `config.workers` threads; rows come back in
/// cell order.
std::vector<SweepRow> run_sweep(const RunConfig& config);

RunResult run(const RunConfig& config, std::ostream& log);

}  // namespace parex
