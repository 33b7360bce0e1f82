#pragma once

// Serialization: CSV, JSON and static SVG emitters. Everything here is a pure
// function of its inputs so repeated runs produce identical bytes.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "parex/dynamics.hpp"
#include "parex/estimators.hpp"
#include "parex/floquet.hpp"

namespace parex {

using Json = nlohmann::ordered_json;

/// Stamped into every output file.
struct Provenance {
    std::string version;
    std::string config_hash;  // 16 hex digits
    std::uint64_t seed = 0;
};

std::string artifact_version();

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

/// %.16e; "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double value);

/// Quotes a CSV field when it holds a comma, quote or line break.
std::string csv_field(std::string_view text);

/// Finite doubles pass through; non-finite values become null.
Json json_number(double value);

Json provenance_json(const Provenance& prov);

class CsvWriter {
public:
    CsvWriter(const Provenance& prov, std::vector<std::string> header);

    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& fields);
    std::string str() const { return text_; }

private:
    std::size_t columns_;
    std::string text_;
};

std::string trajectory_csv(const Trajectory& traj, const Provenance& prov);
Json trajectory_json(const Trajectory& traj, const GrowthFit* fit, const Provenance& prov);

std::string stability_map_csv(const StabilityMap& map, const Provenance& prov);
Json stability_map_json(const StabilityMap& map, const Provenance& prov);

/// Diverging ramp #3b4cc0 (most stable) -> #ffffff (zero) -> #b40426 (most
/// unstable), scaled symmetrically by the largest |exponent|. The zero
/// contour is drawn as a black polyline.
std::string stability_map_svg(const StabilityMap& map, const Provenance& prov);

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f4e79";
};

std::string line_plot_svg(const std::vector<Series>& series, std::string_view title,
                          std::string_view x_label, std::string_view y_label,
                          const Provenance& prov, bool log_y = false);

Json report_json(const ScenarioReport& report);
std::string report_text(const ScenarioReport& report);

/// Creates parent directories; throws IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace parex
