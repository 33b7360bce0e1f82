#include "parex/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "parex/error.hpp"

#ifndef PAREX_VERSION
#define PAREX_VERSION "0.0.0"
#endif

namespace parex {

namespace {

std::string fixed(double v, int decimals = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string svg_provenance(const Provenance& prov) {
    return "<!-- parex " + prov.version + " config " + prov.config_hash + " seed " +
           std::to_string(prov.seed) + " -->\n";
}

struct Rgb {
    int r, g, b;
};

Rgb lerp(Rgb a, Rgb b, double t) {
    auto mix = [t](int x, int y) {
        return static_cast<int>(std::lround(x + (y - x) * t));
    };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

std::string hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

constexpr Rgb kCold{0x3b, 0x4c, 0xc0};
constexpr Rgb kWhite{0xff, 0xff, 0xff};
constexpr Rgb kHot{0xb4, 0x04, 0x26};

std::string ramp(double value, double scale) {
    if (!std::isfinite(value) || scale <= 0.0) return hex(kWhite);
    const double t = std::clamp(value / scale, -1.0, 1.0);
    return t < 0.0 ? hex(lerp(kWhite, kCold, -t)) : hex(lerp(kWhite, kHot, t));
}

Json warnings_json(const std::vector<std::string>& w) {
    Json arr = Json::array();
    for (const auto& s : w) arr.push_back(s);
    return arr;
}

Json optional_number(const std::optional<double>& v) {
    return v ? json_number(*v) : Json(nullptr);
}

std::string surface_name(const Surface& s) {
    return std::holds_alternative<PerfectConductor>(s) ? "perfect_conductor" : "dielectric";
}

}  // namespace

std::string artifact_version() { return PAREX_VERSION; }

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", value);
    return buf;
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

Json json_number(double value) {
    if (!std::isfinite(value)) return nullptr;
    return value;
}

Json provenance_json(const Provenance& prov) {
    Json j;
    j["version"] = prov.version;
    j["config_hash"] = prov.config_hash;
    j["seed"] = prov.seed;
    return j;
}

CsvWriter::CsvWriter(const Provenance& prov, std::vector<std::string> header)
    : columns_(header.size()) {
    text_ = "# parex " + prov.version + " config " + prov.config_hash + " seed " +
            std::to_string(prov.seed) + "\r\n";
    row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values) fields.push_back(format_number(v));
    row(fields);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw IoError("csv: row width does not match header");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) text_ += ',';
        text_ += csv_field(fields[i]);
    }
    text_ += "\r\n";
}

std::string trajectory_csv(const Trajectory& traj, const Provenance& prov) {
    std::vector<std::string> header{"tau", "p", "p_dot"};
    if (traj.has_delta_n()) header.push_back("delta_n");
    CsvWriter csv(prov, header);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.has_delta_n())
            csv.row(std::vector<double>{traj.tau[i], traj.p[i], traj.p_dot[i], traj.delta_n[i]});
        else
            csv.row(std::vector<double>{traj.tau[i], traj.p[i], traj.p_dot[i]});
    }
    return csv.str();
}

Json trajectory_json(const Trajectory& traj, const GrowthFit* fit, const Provenance& prov) {
    Json j;
    j["provenance"] = provenance_json(prov);
    Json meta;
    meta["model"] = std::string(model_name(traj.meta.model));
    meta["omega0"] = json_number(traj.meta.omega0);
    Json params = Json::object();
    for (const auto& [k, v] : traj.meta.parameters) params[k] = json_number(v);
    meta["parameters"] = params;
    meta["steps_per_period"] = traj.meta.steps_per_period;
    meta["periods"] = json_number(traj.meta.periods);
    meta["record_stride"] = traj.meta.record_stride;
    meta["seed"] = traj.meta.seed;
    j["meta"] = meta;
    j["samples"] = traj.size();
    if (traj.size()) {
        j["final"] = {{"tau", json_number(traj.tau.back())},
                      {"p", json_number(traj.p.back())},
                      {"p_dot", json_number(traj.p_dot.back())}};
    }
    if (fit) {
        j["growth_fit"] = {{"omega_pp", json_number(fit->omega_pp)},
                           {"rate_per_omega0", json_number(fit->rate_per_omega0)},
                           {"r_squared", json_number(fit->r_squared)},
                           {"n_extrema", fit->n_extrema},
                           {"low_confidence", fit->low_confidence}};
    }
    return j;
}

std::string stability_map_csv(const StabilityMap& map, const Provenance& prov) {
    CsvWriter csv(prov, {"nu_ratio", "A", "exponent"});
    for (std::size_t i = 0; i < map.nu_axis.size(); ++i)
        for (std::size_t j = 0; j < map.a_axis.size(); ++j)
            csv.row(std::vector<double>{map.nu_axis[i], map.a_axis[j], map.at(i, j)});
    return csv.str();
}

Json stability_map_json(const StabilityMap& map, const Provenance& prov) {
    Json j;
    j["provenance"] = provenance_json(prov);
    j["gamma_ratio"] = json_number(map.gamma_ratio);
    j["n_nu"] = map.nu_axis.size();
    j["n_A"] = map.a_axis.size();
    j["nu_range"] = {json_number(map.nu_axis.front()), json_number(map.nu_axis.back())};
    j["A_range"] = {json_number(map.a_axis.front()), json_number(map.a_axis.back())};
    Json contour = Json::array();
    for (const auto& c : map.threshold_contour)
        contour.push_back({json_number(c.nu_ratio), json_number(c.drive_amplitude)});
    j["threshold_contour"] = contour;
    Json tips = Json::array();
    for (const auto& t : map.tongue_tips) {
        tips.push_back({{"order", t.order},
                        {"nu_ratio", json_number(t.nu_ratio)},
                        {"A", json_number(t.drive_amplitude)},
                        {"offset_from_2_over_N", json_number(t.label_offset)}});
    }
    j["tongue_tips"] = tips;
    const auto [lo, hi] = std::minmax_element(map.exponents.begin(), map.exponents.end());
    j["exponent_min"] = json_number(*lo);
    j["exponent_max"] = json_number(*hi);
    return j;
}

std::string stability_map_svg(const StabilityMap& map, const Provenance& prov) {
    const double left = 70, top = 30, width = 600, height = 400;
    const std::size_t n_nu = map.nu_axis.size(), n_a = map.a_axis.size();
    const double cw = width / n_nu, ch = height / n_a;

    double scale = 0.0;
    for (double e : map.exponents)
        if (std::isfinite(e)) scale = std::max(scale, std::abs(e));

    const double nu0 = map.nu_axis.front(), nu1 = map.nu_axis.back();
    const double a0 = map.a_axis.front(), a1 = map.a_axis.back();
    auto px = [&](double nu) {
        return nu1 > nu0 ? left + cw / 2 + (nu - nu0) / (nu1 - nu0) * (width - cw) : left + width / 2;
    };
    auto py = [&](double a) {
        return a1 > a0 ? top + height - ch / 2 - (a - a0) / (a1 - a0) * (height - ch)
                       : top + height / 2;
    };

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" << svg_provenance(prov);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"500\" "
         "viewBox=\"0 0 760 500\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"760\" height=\"500\" fill=\"#ffffff\"/>\n";
    s << "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < n_nu; ++i) {
        for (std::size_t j = 0; j < n_a; ++j) {
            s << "<rect x=\"" << fixed(left + i * cw) << "\" y=\""
              << fixed(top + height - (j + 1) * ch) << "\" width=\"" << fixed(cw)
              << "\" height=\"" << fixed(ch) << "\" fill=\"" << ramp(map.at(i, j), scale)
              << "\"/>\n";
        }
    }
    s << "</g>\n";
    if (!map.threshold_contour.empty()) {
        s << "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < map.threshold_contour.size(); ++k) {
            const auto& c = map.threshold_contour[k];
            s << (k ? " " : "") << fixed(px(c.nu_ratio)) << ',' << fixed(py(c.drive_amplitude));
        }
        s << "\"/>\n";
    }
    for (const auto& t : map.tongue_tips) {
        s << "<text x=\"" << fixed(px(t.nu_ratio)) << "\" y=\""
          << fixed(py(t.drive_amplitude) - 6) << "\" font-family=\"sans-serif\" font-size=\"12\" "
          << "text-anchor=\"middle\">N=" << t.order << "</text>\n";
    }
    s << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(width)
      << "\" height=\"" << fixed(height) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
    s << "<text x=\"370\" y=\"460\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">nu / omega0 (" << fixed(nu0) << " .. " << fixed(nu1)
      << ")</text>\n";
    s << "<text x=\"20\" y=\"230\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 20 230)\">A (" << fixed(a0, 4) << " .. "
      << fixed(a1, 4) << ")</text>\n";
    s << "<text x=\"370\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">Floquet exponent / omega0, gamma/omega0 = "
      << xml_escape(format_number(map.gamma_ratio)) << ", |max| = "
      << xml_escape(format_number(scale)) << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

std::string line_plot_svg(const std::vector<Series>& series, std::string_view title,
                          std::string_view x_label, std::string_view y_label,
                          const Provenance& prov, bool log_y) {
    const double left = 80, top = 40, width = 600, height = 360;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    auto ty = [log_y](double y) { return log_y ? std::log10(std::abs(y)) : y; };
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double y = ty(s.y[i]);
            if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" << svg_provenance(prov);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"480\" "
         "viewBox=\"0 0 760 480\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"760\" height=\"480\" fill=\"#ffffff\"/>\n";
    s << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(width)
      << "\" height=\"" << fixed(height) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
    for (const auto& ser : series) {
        s << "<polyline fill=\"none\" stroke=\"" << ser.color
          << "\" stroke-width=\"1\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < ser.x.size(); ++i) {
            const double y = ty(ser.y[i]);
            if (!std::isfinite(ser.x[i]) || !std::isfinite(y)) continue;
            s << (first ? "" : " ") << fixed(left + (ser.x[i] - x0) / (x1 - x0) * width) << ','
              << fixed(top + height - (y - y0) / (y1 - y0) * height);
            first = false;
        }
        s << "\"/>\n";
    }
    double ly = top + 16;
    for (const auto& ser : series) {
        s << "<text x=\"" << fixed(left + width - 8) << "\" y=\"" << fixed(ly)
          << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\" fill=\""
          << ser.color << "\">" << xml_escape(ser.label) << "</text>\n";
        ly += 16;
    }
    s << "<text x=\"380\" y=\"25\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">" << xml_escape(title) << "</text>\n";
    s << "<text x=\"380\" y=\"440\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">" << xml_escape(x_label) << " [" << xml_escape(format_number(x0))
      << ", " << xml_escape(format_number(x1)) << "]</text>\n";
    s << "<text x=\"20\" y=\"220\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 20 220)\">"
      << (log_y ? "log10 " : "") << xml_escape(y_label) << " [" << xml_escape(format_number(y0))
      << ", " << xml_escape(format_number(y1)) << "]</text>\n";
    s << "</svg>\n";
    return s.str();
}

Json report_json(const ScenarioReport& r) {
    const Scenario& sc = r.scenario;
    const DipoleTransition& t = sc.transition;
    Json j;
    j["verdict"] = r.verdict;

    Json inputs;
    inputs["transition"] = {
        {"mode", t.mode == TransitionMode::two_level ? "two_level" : "classical"},
        {"omega0_rad_per_s", json_number(t.omega0)},
        {"dipole_esu_cm", optional_number(t.dipole)},
        {"charge_esu", optional_number(t.charge)},
        {"mass_g", optional_number(t.mass)},
        {"gamma_override_per_s", optional_number(t.gamma_override)},
        {"delta_n", optional_number(sc.delta_n)}};
    inputs["grating"] = {{"standoff_cm", json_number(sc.grating.standoff)},
                         {"a", json_number(sc.grating.corrugation)},
                         {"period_cm", json_number(sc.grating.period)},
                         {"speed_cm_per_s", json_number(sc.grating.speed)},
                         {"resonance_order", sc.resonance_order}};
    Json medium = {{"eps1", json_number(sc.medium.eps1)},
                   {"surface", surface_name(sc.medium.surface)},
                   {"orientation", sc.medium.orientation == Orientation::perpendicular
                                       ? "perpendicular"
                                       : "parallel"}};
    if (const auto* d = std::get_if<Dielectric>(&sc.medium.surface)) {
        medium["eps2_real"] = json_number(d->eps2.real());
        medium["eps2_imag"] = json_number(d->eps2.imag());
    }
    inputs["medium"] = medium;
    inputs["beam"] = {{"density_per_cm3", json_number(sc.beam.density)},
                      {"speed_cm_per_s", json_number(sc.beam.speed)}};
    inputs["plate"] = {{"width_cm", json_number(sc.plate.width)},
                       {"length_cm", json_number(sc.plate.length)}};
    j["inputs"] = inputs;

    const ResonanceCheck& rc = r.resonance;
    j["resonance"] = {{"nu_rad_per_s", json_number(rc.nu)},
                      {"bare_target_rad_per_s", json_number(rc.bare_target)},
                      {"bare_match", rc.bare_match},
                      {"static_shift_ratio", json_number(rc.static_shift_ratio)},
                      {"shifted_omega_rad_per_s", optional_number(rc.shifted_omega)},
                      {"shifted_target_rad_per_s", optional_number(rc.shifted_target)},
                      {"detuning_rad_per_s", optional_number(rc.detuning)},
                      {"within_first_tongue", rc.within_first_tongue}};
    j["validity"] = {{"near_zone_ratio", json_number(r.validity.near_zone_ratio)},
                     {"near_zone", r.validity.near_zone},
                     {"standoff_below_period", r.validity.standoff_below_period},
                     {"small_corrugation", r.validity.small_corrugation},
                     {"corrugation_below_one", sc.grating.corrugation < 1.0}};
    j["gamma_per_s"] = json_number(r.gamma);
    j["lambda0_cm"] = json_number(r.lambda0);
    j["threshold"] = {{"lhs", json_number(r.threshold_lhs)},
                      {"lhs_above_one", r.threshold_lhs > 1.0},
                      {"closed_form_A", json_number(r.closed_form_threshold)}};
    j["drive"] = {{"A", json_number(r.drive.amplitude)},
                  {"source", r.drive.source == DriveSource::two_level ? "two_level" : "classical"},
                  {"delta_n", optional_number(r.drive.delta_n)}};
    j["growth"] = {{"omega_pp_per_s", json_number(r.growth.omega_pp)},
                   {"amplitude_damping_per_s", json_number(r.growth.amplitude_damping)},
                   {"net_growth_per_s", json_number(r.growth.net_growth)},
                   {"omega_pp_minus_2gamma_per_s", json_number(r.growth.omega_pp - 2.0 * r.gamma)},
                   {"excitation_length_cm", optional_number(r.growth.excitation_length)},
                   {"excitation_to_plate", optional_number(r.excitation_to_plate)},
                   {"above_threshold", r.growth.above_threshold}};
    const BeamRadiationEstimate& p = r.power;
    j["power"] = {{"n_per_cm3", json_number(p.density)},
                  {"n_total", json_number(p.n_total)},
                  {"n_bunch", json_number(p.n_bunch)},
                  {"single_erg_per_s", json_number(p.single_power)},
                  {"single_w", json_number(BeamRadiationEstimate::watts(p.single_power))},
                  {"incoherent_erg_per_s", json_number(p.incoherent_power)},
                  {"incoherent_w", json_number(BeamRadiationEstimate::watts(p.incoherent_power))},
                  {"coherent_bunch_erg_per_s", json_number(p.coherent_bunch_power)},
                  {"coherent_bunch_w",
                   json_number(BeamRadiationEstimate::watts(p.coherent_bunch_power))},
                  {"bunch_fits_plate", p.bunch_fits_plate}};
    j["warnings"] = warnings_json(r.warnings);
    return j;
}

std::string report_text(const ScenarioReport& r) {
    std::ostringstream s;
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return std::string(buf);
    };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string("n/a"); };
    const auto& rc = r.resonance;
    const auto& p = r.power;
    s << "verdict: " << r.verdict << "\n\n";
    s << "resonance\n";
    s << "  nu                 " << num(rc.nu) << " rad/s\n";
    s << "  2 omega0 / N       " << num(rc.bare_target) << " rad/s (match: "
      << (rc.bare_match ? "yes" : "no") << ")\n";
    s << "  static shift       " << num(rc.static_shift_ratio) << " omega0^2\n";
    s << "  2 omega_bar / N    " << opt(rc.shifted_target) << " rad/s\n";
    s << "  detuning           " << opt(rc.detuning) << " rad/s (inside first tongue: "
      << (rc.within_first_tongue ? "yes" : "no") << ")\n\n";
    s << "validity\n";
    s << "  R0 sqrt(eps1)/lambda0  " << num(r.validity.near_zone_ratio)
      << (r.validity.near_zone ? " (near zone)" : " (outside near zone)") << "\n";
    s << "  R0 < L                 " << (r.validity.standoff_below_period ? "yes" : "no") << "\n";
    s << "  a small                " << (r.validity.small_corrugation ? "yes" : "no") << "\n\n";
    s << "threshold\n";
    s << "  lambda0            " << num(r.lambda0) << " cm\n";
    s << "  gamma              " << num(r.gamma) << " 1/s\n";
    s << "  threshold LHS      " << num(r.threshold_lhs) << (r.threshold_lhs > 1 ? " > 1" : " <= 1")
      << "\n";
    s << "  A                  " << num(r.drive.amplitude) << "\n";
    s << "  A threshold        " << num(r.closed_form_threshold) << "\n\n";
    s << "growth\n";
    s << "  omega''            " << num(r.growth.omega_pp) << " 1/s\n";
    s << "  net of damping     " << num(r.growth.net_growth) << " 1/s\n";
    s << "  omega'' - 2 gamma  " << num(r.growth.omega_pp - 2.0 * r.gamma) << " 1/s\n";
    s << "  excitation length  " << opt(r.growth.excitation_length) << " cm ("
      << opt(r.excitation_to_plate) << " x plate length)\n\n";
    s << "power\n";
    s << "  N total            " << num(p.n_total) << "\n";
    s << "  N bunch            " << num(p.n_bunch) << "\n";
    s << "  W1                 " << num(p.single_power) << " erg/s = "
      << num(BeamRadiationEstimate::watts(p.single_power)) << " W\n";
    s << "  N W1               " << num(p.incoherent_power) << " erg/s = "
      << num(BeamRadiationEstimate::watts(p.incoherent_power)) << " W\n";
    s << "  N_bunch^2 W1       " << num(p.coherent_bunch_power) << " erg/s = "
      << num(BeamRadiationEstimate::watts(p.coherent_bunch_power)) << " W\n";
    if (!r.warnings.empty()) {
        s << "\nwarnings\n";
        for (const auto& w : r.warnings) s << "  - " << w << "\n";
    }
    return s.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " +
                          ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace parex
