#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "parex/config.hpp"
#include "parex/io.hpp"
#include "parex/runner.hpp"

using namespace parex;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("parex_runner_" + name);
    fs::remove_all(dir);
    return dir;
}

RunConfig shipped(const std::string& file, const fs::path& out) {
    auto cfg = load_config(std::string(PAREX_SOURCE_DIR) + "/configs/" + file);
    cfg.output_dir = out;
    return cfg;
}

// Data rows of a parex CSV (provenance line and header dropped).
std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (n++ < 2 || line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(row);
    }
    return rows;
}

const char* kMapConfig =
    "command = floquet-map\n"
    "transition.mode = two_level\n"
    "transition.omega0_rad_per_s = 1e11\n"
    "transition.dipole_debye = 1\n"
    "grating.standoff_um = 0.1\n"
    "floquet.gamma_ratio = 1e-3\n"
    "floquet.n_nu = 8\nfloquet.n_A = 8\n"
    "floquet.A_min = 0\nfloquet.A_max = 0\n";

}  // namespace

TEST_CASE("threshold on the baseline") {
    const auto dir = scratch("threshold");
    auto cfg = shipped("baseline.cfg", dir);
    set_command(cfg, "threshold");
    std::ostringstream log;
    const auto r = run(cfg, log);
    REQUIRE(r.files.size() == 1);
    const auto j = nlohmann::json::parse(slurp(dir / "threshold.json"));
    // gamma/omega0 here is below the resolvable floor, so the closed form is used.
    CHECK(j["A_th_source"] == "closed_form");
    const double g = j["gamma_ratio"].get<double>();
    CHECK(g < 1e-8);
    CHECK(g == doctest::Approx(4.69e-19).epsilon(0.01));
    CHECK(j["A_th"].get<double>() == doctest::Approx(4 * g));
    CHECK(j["threshold_lhs"].get<double>() == doctest::Approx(7.578e11).epsilon(1e-3));
    CHECK(j["lhs_above_one"] == true);
    CHECK(j["drive_above_threshold"] == true);
    CHECK(j["provenance"]["config_hash"] == cfg.hash());
    CHECK(log.str().rfind("threshold: A_th=", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("threshold with a resolvable linewidth uses bisection") {
    const auto dir = scratch("threshold_fl");
    auto cfg = shipped("mathieu_threshold.cfg", dir);
    std::ostringstream log;
    run(cfg, log);
    const auto j = nlohmann::json::parse(slurp(dir / "threshold.json"));
    CHECK(j["A_th_source"] == "floquet");
    CHECK(j["A_th"].get<double>() == doctest::Approx(4e-3).epsilon(0.02));
    CHECK(j["drive_above_threshold"] == true);
    fs::remove_all(dir);
}

TEST_CASE("zero-drive map is uniformly minus gamma") {
    const auto dir = scratch("map");
    auto cfg = parse_config(kMapConfig);
    cfg.output_dir = dir;
    std::ostringstream log;
    const auto r = run(cfg, log);
    CHECK(r.files.size() == 3);
    const auto rows = csv_rows(slurp(dir / "stability_map.csv"));
    REQUIRE(rows.size() == 64);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 3);
        CHECK(row[2] == doctest::Approx(-1e-3).epsilon(1e-8));
    }
    fs::remove_all(dir);
}

TEST_CASE("every artifact carries provenance") {
    const auto dir = scratch("prov");
    auto cfg = parse_config(kMapConfig);
    cfg.output_dir = dir;
    cfg.seed = 5;
    std::ostringstream log;
    run(cfg, log);
    const std::string stamp = "parex " + artifact_version() + " config " + cfg.hash() + " seed 5";
    CHECK(slurp(dir / "stability_map.csv").rfind("# " + stamp + "\r\n", 0) == 0);
    CHECK(slurp(dir / "stability_map.svg").find("<!-- " + stamp) != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(dir / "stability_map.json"));
    CHECK(j["provenance"]["version"] == artifact_version());
    CHECK(j["provenance"]["config_hash"] == cfg.hash());
    CHECK(j["provenance"]["seed"] == 5);
    fs::remove_all(dir);
}

TEST_CASE("format selection") {
    const auto dir = scratch("formats");
    auto cfg = parse_config(kMapConfig);
    cfg.output_dir = dir;
    set_formats(cfg, "json");
    std::ostringstream log;
    const auto r = run(cfg, log);
    REQUIRE(r.files.size() == 1);
    CHECK(r.files[0].filename() == "stability_map.json");
    fs::remove_all(dir);
}

TEST_CASE("sweep growth ratio tends to one at small corrugation") {
    const auto dir = scratch("sweep");
    auto cfg = shipped("strong_coupling_sweep.cfg", dir);
    std::ostringstream log;
    run(cfg, log);
    const auto rows = csv_rows(slurp(dir / "sweep.csv"));
    REQUIRE(rows.size() == 11);
    CHECK(rows[0][0] == 0.0);
    CHECK(rows[0][2] == 0.0);
    CHECK(std::isnan(rows[0][3]));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CAPTURE(rows[i][0]);
        CHECK(std::abs(rows[i][3] - 1.0) < 0.02);
    }
    CHECK(std::abs(rows[1][3] - 1.0) < 0.005);
    fs::remove_all(dir);
}

TEST_CASE("repeat runs are byte-identical and worker-count independent") {
    const auto a = scratch("repeat_a"), b = scratch("repeat_b"), c = scratch("repeat_c");
    auto cfg = shipped("strong_coupling_sweep.cfg", a);
    cfg.sweep.count = 4;
    cfg.workers = 1;
    std::ostringstream log;
    run(cfg, log);
    cfg.output_dir = b;
    run(cfg, log);
    cfg.output_dir = c;
    cfg.workers = 4;
    run(cfg, log);
    for (const char* f : {"sweep.csv", "sweep.json", "sweep.svg"}) {
        CAPTURE(f);
        const auto first = slurp(a / f);
        CHECK_FALSE(first.empty());
        CHECK(first == slurp(b / f));
        CHECK(first == slurp(c / f));
    }
    fs::remove_all(a);
    fs::remove_all(b);
    fs::remove_all(c);
}

TEST_CASE("simulate and estimate write their artifacts") {
    const auto dir = scratch("sim");
    auto cfg = shipped("mathieu_simulate.cfg", dir);
    cfg.simulate.options.periods = 300;
    std::ostringstream log;
    run(cfg, log);
    const auto j = nlohmann::json::parse(slurp(dir / "run.json"));
    CHECK(j["command"] == "simulate");
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "trajectory.svg"));

    auto est = shipped("baseline.cfg", dir);
    run(est, log);
    const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(rep["verdict"] == "unstable");
    CHECK(fs::exists(dir / "report.txt"));
    fs::remove_all(dir);
}
