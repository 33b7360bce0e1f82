#pragma once

// Line-oriented run configuration.
//
//   # comment
//   section.key = value [unit]
//
// Keys carry their unit in the suffix (standoff_um, speed_km_per_s, ...). An
// optional trailing unit token must agree with that suffix. Unknown keys,
// duplicates, unparseable values and missing required keys are rejected with
// the offending line number.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parex/dynamics.hpp"
#include "parex/estimators.hpp"
#include "parex/floquet.hpp"

namespace parex {

enum class ValueType { number, integer, text, boolean };

struct KeySpec {
    std::string_view key;
    ValueType type;
    std::string_view default_value;  // empty: no default
    bool required;
    std::string_view doc;
};

/// Every accepted key in canonical order.
const std::vector<KeySpec>& config_keys();
const KeySpec* find_key(std::string_view key);

struct SimulateSettings {
    ModelKind model = ModelKind::exact_inverse_cube;
    SimulationOptions options;
    std::optional<double> p0;  // esu cm; defaults to d (two-level) or 1
    bool random_phase = false;
    double fit_window = kDefaultFitWindow;
    std::optional<double> delta_n_pump;
};

/// Direct Mathieu parameters; each falls back to the scenario when unset.
struct MathieuSettings {
    std::optional<double> drive_amplitude;
    std::optional<double> nu_ratio;
    std::optional<double> gamma_ratio;
};

struct FloquetSettings {
    std::optional<double> gamma_ratio;
    double nu_ratio = 2.0;  // threshold command
    StabilityMapOptions map;
};

enum class SweepScale { linear, log };

struct SweepSettings {
    std::string parameter;
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    SweepScale scale = SweepScale::linear;

    std::vector<double> values() const;
};

struct RunConfig {
    std::string command;  // simulate | floquet-map | threshold | estimate | sweep
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::filesystem::path output_dir = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};

    Scenario scenario;
    bool tune_to_shifted = false;
    SimulateSettings simulate;
    MathieuSettings mathieu;
    FloquetSettings floquet;
    SweepSettings sweep;

    /// Explicitly given values, unit tokens stripped, keyed by full key.
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines;

    bool wants(std::string_view format) const;

    /// Every key that affects results (explicit or defaulted) as
    /// `key = value` lines in canonical order. Output location and worker
    /// count are excluded so they never change artifact bytes.
    std::string canonical() const;
    std::string hash() const;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Copy of `config` with one numeric key replaced and the scenario
/// re-resolved. Used by sweeps.
RunConfig with_value(const RunConfig& config, std::string_view key, double value);

/// Command-line overrides; re-validated the same way as file values.
void set_command(RunConfig& config, std::string_view command);
void set_formats(RunConfig& config, std::string_view list);

}  // namespace parex
