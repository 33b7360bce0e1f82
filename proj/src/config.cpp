#include "parex/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "parex/boundary_fields.hpp"
#include "parex/error.hpp"
#include "parex/io.hpp"

namespace parex {

namespace {

using VT = ValueType;

const std::vector<KeySpec> kKeys = {
    {"command", VT::text, "", true, "simulate | floquet-map | threshold | estimate | sweep"},
    {"seed", VT::integer, "0", false, "seed for random initial phases"},
    {"workers", VT::integer, "1", false, "parallel workers for maps and sweeps"},
    {"output.directory", VT::text, "out", false, "artifact directory"},
    {"output.formats", VT::text, "csv,json,svg", false, "comma list of csv, json, svg"},

    {"transition.mode", VT::text, "", true, "classical | two_level"},
    {"transition.omega0_rad_per_s", VT::number, "", true, "transition angular frequency"},
    {"transition.dipole_debye", VT::number, "", false, "two-level dipole matrix element"},
    {"transition.charge_esu", VT::number, "4.803204712570263e-10", false, "classical charge"},
    {"transition.mass_g", VT::number, "9.1093837015e-28", false, "classical mass"},
    {"transition.gamma_per_s", VT::number, "", false, "linewidth override"},
    {"transition.delta_n", VT::number, "", false, "population difference (two-level, default 1)"},
    {"transition.temperature_k", VT::number, "", false, "thermal estimate of delta_n"},

    {"grating.standoff_um", VT::number, "", true, "mean standoff R0"},
    {"grating.a", VT::number, "0.1", false, "relative corrugation amplitude, 0 <= a < 1"},
    {"grating.period_um", VT::number, "", false, "grating period L (tuned when absent)"},
    {"grating.resonance_order", VT::integer, "1", false, "N in nu = 2 omega / N"},
    {"grating.tune_to_shifted", VT::boolean, "false", false,
     "tune L to the boundary-shifted frequency instead of omega0"},

    {"beam.speed_km_per_s", VT::number, "1", false, "molecular speed v"},
    {"beam.density_per_cm3", VT::number, "1e17", false, "beam density n"},

    {"medium.eps1", VT::number, "1", false, "permittivity around the molecule"},
    {"medium.plasma_density_per_cm3", VT::number, "", false, "sets eps1 from a plasma"},
    {"medium.surface", VT::text, "perfect_conductor", false, "perfect_conductor | dielectric"},
    {"medium.eps2_real", VT::number, "", false, "dielectric substrate"},
    {"medium.eps2_imag", VT::number, "0", false, "dielectric substrate"},
    {"medium.orientation", VT::text, "perpendicular", false, "perpendicular | parallel"},

    {"plate.width_cm", VT::number, "1", false, ""},
    {"plate.length_cm", VT::number, "10", false, ""},

    {"simulate.model", VT::text, "exact", false, "mathieu | exact | retarded | bloch"},
    {"simulate.periods", VT::number, "200", false, "horizon in units of 2 pi / omega0"},
    {"simulate.steps_per_period", VT::integer, "256", false, ""},
    {"simulate.record_stride", VT::integer, "1", false, ""},
    {"simulate.p0_esu_cm", VT::number, "", false, "initial dipole (default d, or 1)"},
    {"simulate.random_phase", VT::boolean, "false", false, "seeded random initial phase"},
    {"simulate.fit_window", VT::number, "0.8", false, "trailing fraction used for the fit"},
    {"simulate.delta_n_pump", VT::number, "", false, "Bloch relaxation target"},

    {"mathieu.A", VT::number, "", false, "drive amplitude override"},
    {"mathieu.nu_ratio", VT::number, "", false, "nu / omega0 override"},
    {"mathieu.gamma_ratio", VT::number, "", false, "gamma / omega0 override"},

    {"floquet.gamma_ratio", VT::number, "", false, "default: effective damping / 2 omega0"},
    {"floquet.nu_ratio", VT::number, "2", false, "threshold command"},
    {"floquet.nu_min", VT::number, "0.5", false, ""},
    {"floquet.nu_max", VT::number, "2.5", false, ""},
    {"floquet.A_min", VT::number, "0", false, ""},
    {"floquet.A_max", VT::number, "0.3", false, ""},
    {"floquet.n_nu", VT::integer, "64", false, ""},
    {"floquet.n_A", VT::integer, "32", false, ""},
    {"floquet.steps_per_period", VT::integer, "1024", false, ""},

    {"sweep.parameter", VT::text, "", false, "numeric key to vary"},
    {"sweep.min", VT::number, "", false, ""},
    {"sweep.max", VT::number, "", false, ""},
    {"sweep.count", VT::integer, "", false, ""},
    {"sweep.scale", VT::text, "linear", false, "linear | log"},
};

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<SiUnit> si_unit_of(std::string_view key) {
    if (ends_with(key, "_debye")) return SiUnit::debye;
    if (ends_with(key, "_um")) return SiUnit::micrometer;
    if (ends_with(key, "_km_per_s")) return SiUnit::km_per_s;
    if (ends_with(key, "_per_cm3")) return SiUnit::per_cm3;
    if (ends_with(key, "_k")) return SiUnit::kelvin;
    if (ends_with(key, "_rad_per_s")) return SiUnit::hz_angular;
    return std::nullopt;
}

// Tokens for units the quantities module does not convert.
std::vector<std::string_view> native_units(std::string_view key) {
    if (ends_with(key, "_esu_cm")) return {"esu*cm", "esu_cm"};
    if (ends_with(key, "_esu")) return {"esu"};
    if (ends_with(key, "_per_s")) return {"1/s", "s^-1"};
    if (ends_with(key, "_cm")) return {"cm"};
    if (ends_with(key, "_g")) return {"g"};
    return {};
}

bool unit_matches(std::string_view key, std::string_view unit) {
    if (auto si = si_unit_of(key)) {
        try {
            return parse_si_unit(unit) == *si;
        } catch (const ConfigError&) {
            return unit == "cm^-3" && *si == SiUnit::per_cm3;
        }
    }
    const auto accepted = native_units(key);
    return std::find(accepted.begin(), accepted.end(), unit) != accepted.end();
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long long> parse_integer(std::string_view s) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

void check_type(const KeySpec& spec, const std::string& value, int line) {
    auto fail = [&](const char* what) {
        throw ConfigError("line " + std::to_string(line) + ": " + std::string(spec.key) + ": " +
                          what + " '" + value + "'");
    };
    switch (spec.type) {
        case VT::number:
            if (!parse_double(value)) fail("unparseable number");
            break;
        case VT::integer:
            if (!parse_integer(value)) fail("unparseable integer");
            break;
        case VT::boolean:
            if (value != "true" && value != "false") fail("expected true or false, got");
            break;
        case VT::text:
            break;
    }
}

// Typed access to the explicit values with line-attributed errors.
class Reader {
public:
    Reader(const std::map<std::string, std::string>& values, const std::map<std::string, int>& lines,
           int last_line)
        : values_(values), lines_(lines), last_line_(last_line) {}

    bool has(std::string_view key) const { return values_.count(std::string(key)) != 0; }

    [[noreturn]] void fail(std::string_view key, const std::string& what) const {
        const auto it = lines_.find(std::string(key));
        const std::string where =
            it != lines_.end() ? "line " + std::to_string(it->second) : "config";
        throw ConfigError(where + ": " + std::string(key) + ": " + what);
    }

    std::string raw(std::string_view key) const {
        if (auto it = values_.find(std::string(key)); it != values_.end()) return it->second;
        const KeySpec* spec = find_key(key);
        if (spec->required)
            throw ConfigError("line " + std::to_string(last_line_) + " (end of input): missing "
                              "required key '" + std::string(key) + "'");
        return std::string(spec->default_value);
    }

    std::optional<double> number(std::string_view key) const {
        const std::string s = raw(key);
        if (s.empty()) return std::nullopt;
        return *parse_double(s);
    }
    double number_or(std::string_view key) const { return *number(key); }
    long long integer(std::string_view key) const { return *parse_integer(raw(key)); }
    bool boolean(std::string_view key) const { return raw(key) == "true"; }
    std::string text(std::string_view key) const { return raw(key); }

    double positive(std::string_view key) const {
        const double v = number_or(key);
        if (!(v > 0.0)) fail(key, "must be positive");
        return v;
    }
    double non_negative(std::string_view key) const {
        const double v = number_or(key);
        if (!(v >= 0.0)) fail(key, "must be >= 0");
        return v;
    }

private:
    const std::map<std::string, std::string>& values_;
    const std::map<std::string, int>& lines_;
    int last_line_;
};

void validate_sweep(const RunConfig& cfg, const Reader& in) {
    if (cfg.command != "sweep") return;
    const std::string param = in.text("sweep.parameter");
    if (param.empty()) throw ConfigError("config: sweep requires sweep.parameter");
    const KeySpec* spec = find_key(param);
    if (!spec || spec->type != VT::number || param.rfind("sweep.", 0) == 0)
        in.fail("sweep.parameter", "'" + param + "' is not a numeric scenario key");
    for (const char* k : {"sweep.min", "sweep.max", "sweep.count"})
        if (!in.has(k)) throw ConfigError("config: sweep requires " + std::string(k));
    if (cfg.sweep.count < 2) in.fail("sweep.count", "must be >= 2");
    if (cfg.sweep.max < cfg.sweep.min) in.fail("sweep.max", "must be >= sweep.min");
    if (cfg.sweep.scale == SweepScale::log && !(cfg.sweep.min > 0.0))
        in.fail("sweep.min", "log scale needs a positive minimum");
}

void apply_formats(RunConfig& cfg, std::string_view list, const Reader* in) {
    std::vector<std::string> formats;
    std::stringstream ss{std::string(list)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (item != "csv" && item != "json" && item != "svg") {
            const std::string msg = "unknown format '" + item + "' (csv, json, svg)";
            if (in) in->fail("output.formats", msg);
            throw ConfigError("--format: " + msg);
        }
        if (std::find(formats.begin(), formats.end(), item) == formats.end())
            formats.push_back(item);
    }
    cfg.formats = formats;
}

// Defaults of mode-specific keys only show up in the canonical dump when
// the mode uses them.
bool default_applies(std::string_view key, const Scenario& sc) {
    if (key == "transition.charge_esu" || key == "transition.mass_g")
        return sc.transition.mode == TransitionMode::classical;
    if (key == "medium.eps2_imag") return !sc.medium.perfect_conductor();
    return true;
}

bool known_command(std::string_view c) {
    return c == "simulate" || c == "floquet-map" || c == "threshold" || c == "estimate" ||
           c == "sweep";
}

RunConfig resolve(const std::map<std::string, std::string>& values,
                  const std::map<std::string, int>& lines, int last_line) {
    Reader in(values, lines, last_line);
    RunConfig cfg;
    cfg.values = values;
    cfg.lines = lines;

    cfg.command = in.text("command");
    if (!known_command(cfg.command)) in.fail("command", "unknown command '" + cfg.command + "'");
    const long long seed = in.integer("seed");
    if (seed < 0) in.fail("seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);
    const long long workers = in.integer("workers");
    if (workers < 1) in.fail("workers", "must be >= 1");
    cfg.workers = static_cast<unsigned>(workers);
    cfg.output_dir = in.text("output.directory");
    apply_formats(cfg, in.text("output.formats"), &in);

    // transition
    Scenario& sc = cfg.scenario;
    const std::string mode = in.text("transition.mode");
    const double omega0 = in.positive("transition.omega0_rad_per_s");
    if (mode == "two_level") {
        if (!in.has("transition.dipole_debye"))
            throw ConfigError("config: two_level mode requires transition.dipole_debye");
        for (const char* k : {"transition.charge_esu", "transition.mass_g"})
            if (in.has(k)) in.fail(k, "only valid for classical mode");
        const double d = in.positive("transition.dipole_debye");
        sc.transition = DipoleTransition::two_level(omega0, from_si(d, SiUnit::debye));
    } else if (mode == "classical") {
        if (in.has("transition.dipole_debye"))
            in.fail("transition.dipole_debye", "only valid for two_level mode");
        for (const char* k : {"transition.delta_n", "transition.temperature_k"})
            if (in.has(k)) in.fail(k, "only valid for two_level mode");
        sc.transition = DipoleTransition::classical(omega0, in.positive("transition.charge_esu"),
                                                    in.positive("transition.mass_g"));
    } else {
        in.fail("transition.mode", "expected classical or two_level, got '" + mode + "'");
    }
    if (in.has("transition.gamma_per_s"))
        sc.transition.gamma_override = in.non_negative("transition.gamma_per_s");
    if (in.has("transition.delta_n") && in.has("transition.temperature_k"))
        in.fail("transition.temperature_k", "give either delta_n or temperature_k, not both");
    if (in.has("transition.delta_n")) sc.delta_n = in.number_or("transition.delta_n");
    if (in.has("transition.temperature_k"))
        sc.delta_n = thermal_population_difference(omega0, in.positive("transition.temperature_k"));

    // medium
    MediumPair& m = sc.medium;
    if (in.has("medium.plasma_density_per_cm3")) {
        if (in.has("medium.eps1"))
            in.fail("medium.plasma_density_per_cm3", "give either eps1 or plasma density");
        m.eps1 = plasma_epsilon(in.non_negative("medium.plasma_density_per_cm3"), omega0);
        if (!(m.eps1 > 0.0))
            in.fail("medium.plasma_density_per_cm3", "plasma is opaque at omega0 (eps1 <= 0)");
    } else {
        m.eps1 = in.positive("medium.eps1");
    }
    const std::string surface = in.text("medium.surface");
    if (surface == "dielectric") {
        if (!in.has("medium.eps2_real"))
            throw ConfigError("config: dielectric surface requires medium.eps2_real");
        m.surface = Dielectric{{in.number_or("medium.eps2_real"), in.number_or("medium.eps2_imag")}};
    } else if (surface == "perfect_conductor") {
        for (const char* k : {"medium.eps2_real", "medium.eps2_imag"})
            if (in.has(k)) in.fail(k, "only valid for a dielectric surface");
        m.surface = PerfectConductor{};
    } else {
        in.fail("medium.surface", "expected perfect_conductor or dielectric, got '" + surface + "'");
    }
    const std::string orient = in.text("medium.orientation");
    if (orient == "perpendicular")
        m.orientation = Orientation::perpendicular;
    else if (orient == "parallel")
        m.orientation = Orientation::parallel;
    else
        in.fail("medium.orientation", "expected perpendicular or parallel, got '" + orient + "'");
    try {
        m.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("config: medium: ") + e.what());
    }

    // grating and beam
    const double standoff = from_si(in.positive("grating.standoff_um"), SiUnit::micrometer);
    const double a = in.number_or("grating.a");
    if (!(a >= 0.0)) in.fail("grating.a", "corrugation amplitude must be >= 0");
    if (!(a < 1.0)) in.fail("grating.a", "corrugation amplitude must be < 1");
    const long long order = in.integer("grating.resonance_order");
    if (order < 1) in.fail("grating.resonance_order", "must be >= 1");
    sc.resonance_order = static_cast<int>(order);
    cfg.tune_to_shifted = in.boolean("grating.tune_to_shifted");
    const double speed = from_si(in.non_negative("beam.speed_km_per_s"), SiUnit::km_per_s);
    sc.beam = Beam{in.non_negative("beam.density_per_cm3"), speed};
    sc.plate = Plate{in.positive("plate.width_cm"), in.positive("plate.length_cm")};

    double period = 1.0;  // irrelevant without motion
    if (in.has("grating.period_um")) {
        period = from_si(in.positive("grating.period_um"), SiUnit::micrometer);
    } else if (speed > 0.0) {
        double target = omega0;
        if (cfg.tune_to_shifted) {
            const GratingKinematics probe{standoff, a, 1.0, speed};
            try {
                target = shifted_frequency(sc.transition, probe, m, sc.delta_n.value_or(1.0));
            } catch (const Error& e) {
                in.fail("grating.tune_to_shifted", e.what());
            }
        }
        period = tuned_period(speed, target, sc.resonance_order);
    }
    sc.grating = GratingKinematics::make(standoff, a, period, speed);

    // simulate
    SimulateSettings& sim = cfg.simulate;
    try {
        sim.model = parse_model(in.text("simulate.model"));
    } catch (const Error& e) {
        in.fail("simulate.model", e.what());
    }
    sim.options.periods = in.positive("simulate.periods");
    const long long steps = in.integer("simulate.steps_per_period");
    if (steps < 64) in.fail("simulate.steps_per_period", "must be >= 64");
    sim.options.steps_per_period = static_cast<int>(steps);
    const long long stride = in.integer("simulate.record_stride");
    if (stride < 1) in.fail("simulate.record_stride", "must be >= 1");
    sim.options.record_stride = static_cast<int>(stride);
    sim.options.seed = cfg.seed;
    if (in.has("simulate.p0_esu_cm")) sim.p0 = in.number_or("simulate.p0_esu_cm");
    sim.random_phase = in.boolean("simulate.random_phase");
    sim.fit_window = in.number_or("simulate.fit_window");
    if (!(sim.fit_window > 0.0 && sim.fit_window <= 1.0))
        in.fail("simulate.fit_window", "must lie in (0, 1]");
    if (in.has("simulate.delta_n_pump")) sim.delta_n_pump = in.number_or("simulate.delta_n_pump");
    if (sim.model == ModelKind::bloch && sc.transition.mode != TransitionMode::two_level)
        in.fail("simulate.model", "bloch needs a two_level transition");

    // mathieu
    cfg.mathieu.drive_amplitude = in.number("mathieu.A");
    if (in.has("mathieu.nu_ratio")) cfg.mathieu.nu_ratio = in.positive("mathieu.nu_ratio");
    if (in.has("mathieu.gamma_ratio")) cfg.mathieu.gamma_ratio = in.non_negative("mathieu.gamma_ratio");

    // floquet
    FloquetSettings& fl = cfg.floquet;
    if (in.has("floquet.gamma_ratio")) fl.gamma_ratio = in.non_negative("floquet.gamma_ratio");
    fl.nu_ratio = in.positive("floquet.nu_ratio");
    fl.map.nu_min = in.positive("floquet.nu_min");
    fl.map.nu_max = in.positive("floquet.nu_max");
    if (fl.map.nu_max < fl.map.nu_min) in.fail("floquet.nu_max", "must be >= nu_min");
    fl.map.a_min = in.number_or("floquet.A_min");
    fl.map.a_max = in.number_or("floquet.A_max");
    if (fl.map.a_max < fl.map.a_min) in.fail("floquet.A_max", "must be >= A_min");
    const long long n_nu = in.integer("floquet.n_nu");
    const long long n_a = in.integer("floquet.n_A");
    if (n_nu < 8) in.fail("floquet.n_nu", "must be >= 8");
    if (n_a < 8) in.fail("floquet.n_A", "must be >= 8");
    fl.map.n_nu = static_cast<std::size_t>(n_nu);
    fl.map.n_a = static_cast<std::size_t>(n_a);
    const long long fsteps = in.integer("floquet.steps_per_period");
    if (fsteps < 256) in.fail("floquet.steps_per_period", "must be >= 256");
    fl.map.steps_per_period = static_cast<int>(fsteps);
    fl.map.workers = cfg.workers;

    // sweep
    SweepSettings& sw = cfg.sweep;
    sw.parameter = in.text("sweep.parameter");
    if (in.has("sweep.min")) sw.min = in.number_or("sweep.min");
    if (in.has("sweep.max")) sw.max = in.number_or("sweep.max");
    if (in.has("sweep.count")) sw.count = static_cast<int>(in.integer("sweep.count"));
    const std::string scale = in.text("sweep.scale");
    if (scale == "linear")
        sw.scale = SweepScale::linear;
    else if (scale == "log")
        sw.scale = SweepScale::log;
    else
        in.fail("sweep.scale", "expected linear or log, got '" + scale + "'");
    validate_sweep(cfg, in);
    return cfg;
}

}  // namespace

const std::vector<KeySpec>& config_keys() { return kKeys; }

const KeySpec* find_key(std::string_view key) {
    for (const auto& k : kKeys)
        if (k.key == key) return &k;
    return nullptr;
}

std::vector<double> SweepSettings::values() const {
    std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        out[i] = scale == SweepScale::log
                     ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
                     : min + t * (max - min);
    }
    if (count > 1) {
        out.front() = min;
        out.back() = max;
    }
    return out;
}

bool RunConfig::wants(std::string_view format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

std::string RunConfig::canonical() const {
    std::string out;
    for (const auto& spec : kKeys) {
        const std::string key(spec.key);
        if (key == "workers" || key.rfind("output.", 0) == 0) continue;
        std::string value;
        if (key == "command")
            value = command;
        else if (key == "seed")
            value = std::to_string(seed);
        else if (auto it = values.find(key); it != values.end())
            value = it->second;
        else if (!default_applies(key, scenario))
            continue;
        else
            value = std::string(spec.default_value);
        if (value.empty()) continue;
        out += key + " = " + value + "\n";
    }
    return out;
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical()); }

RunConfig parse_config(std::string_view text) {
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines;
    std::istringstream stream{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(stream, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = "line " + std::to_string(number) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string rhs = trim(std::string_view(body).substr(eq + 1));
        const KeySpec* spec = find_key(key);
        if (!spec) throw ConfigError(where + "unknown key '" + key + "'");
        if (values.count(key))
            throw ConfigError(where + "duplicate key '" + key + "' (first on line " +
                              std::to_string(lines[key]) + ")");

        std::istringstream tokens(rhs);
        std::string value, unit, extra;
        tokens >> value >> unit >> extra;
        if (value.empty()) throw ConfigError(where + key + ": missing value");
        if (!extra.empty()) throw ConfigError(where + key + ": unexpected text '" + extra + "'");
        if (!unit.empty()) {
            if (spec->type != VT::number)
                throw ConfigError(where + key + ": unexpected text '" + unit + "'");
            if (!unit_matches(key, unit))
                throw ConfigError(where + key + ": unit mismatch, '" + unit +
                                  "' does not match the key suffix");
        }
        check_type(*spec, value, number);
        values[key] = value;
        lines[key] = number;
    }
    return resolve(values, lines, number);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

RunConfig with_value(const RunConfig& config, std::string_view key, double value) {
    const KeySpec* spec = find_key(key);
    if (!spec || spec->type != VT::number)
        throw ConfigError("'" + std::string(key) + "' is not a numeric key");
    auto values = config.values;
    values[std::string(key)] = format_number(value);
    values["command"] = config.command;
    values["seed"] = std::to_string(config.seed);
    RunConfig out = resolve(values, config.lines, 0);
    out.workers = config.workers;
    out.floquet.map.workers = config.workers;
    out.output_dir = config.output_dir;
    out.formats = config.formats;
    return out;
}

void set_command(RunConfig& config, std::string_view command) {
    if (!known_command(command))
        throw ConfigError("unknown command '" + std::string(command) + "'");
    config.command = command;
    config.values["command"] = config.command;
    Reader in(config.values, config.lines, 0);
    validate_sweep(config, in);
}

void set_formats(RunConfig& config, std::string_view list) {
    apply_formats(config, list, nullptr);
}

}  // namespace parex
