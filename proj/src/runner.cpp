#include "parex/runner.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "parex/boundary_fields.hpp"
#include "parex/error.hpp"
#include "parex/floquet.hpp"
#include "parex/integrator.hpp"

namespace parex {

namespace {

// Below this gamma/omega0 the threshold bisection cannot separate the
// exponent from the integrator's own error.
constexpr double kMinResolvableGammaRatio = 1e-8;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string g4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

double amplitude_damping(const RunConfig& cfg) {
    const Scenario& sc = cfg.scenario;
    return 0.5 * effective_coefficients(sc.transition, sc.grating.standoff, sc.medium).damping_rate;
}

double mathieu_gamma(const RunConfig& cfg) {
    if (cfg.mathieu.gamma_ratio) return *cfg.mathieu.gamma_ratio * cfg.scenario.transition.omega0;
    return amplitude_damping(cfg);
}

double mathieu_drive(const RunConfig& cfg) {
    if (cfg.mathieu.drive_amplitude) return *cfg.mathieu.drive_amplitude;
    const Scenario& sc = cfg.scenario;
    return drive_amplitude(sc.transition, sc.grating, sc.medium, sc.delta_n).amplitude;
}

double floquet_gamma_ratio(const RunConfig& cfg) {
    if (cfg.floquet.gamma_ratio) return *cfg.floquet.gamma_ratio;
    return amplitude_damping(cfg) / cfg.scenario.transition.omega0;
}

class Emitter {
public:
    Emitter(const RunConfig& cfg, RunResult& result) : cfg_(cfg), result_(result) {}

    void write(const std::string& name, const std::string& content) {
        const auto path = cfg_.output_dir / name;
        write_file(path, content);
        result_.files.push_back(path);
    }
    void csv(const std::string& name, const std::string& content) {
        if (cfg_.wants("csv")) write(name, content);
    }
    void json(const std::string& name, const Json& j) {
        if (cfg_.wants("json")) write(name, dump(j));
    }
    void svg(const std::string& name, const std::string& content) {
        if (cfg_.wants("svg")) write(name, content);
    }

private:
    const RunConfig& cfg_;
    RunResult& result_;
};

void say(RunResult& result, std::ostream& log, const std::string& line) {
    result.summary.push_back(line);
    log << line << '\n';
}

Json base_record(const RunConfig& cfg, const Provenance& prov) {
    Json j;
    j["provenance"] = provenance_json(prov);
    j["command"] = cfg.command;
    j["config"] = config_json(cfg);
    return j;
}

void run_simulate(const RunConfig& cfg, const Provenance& prov, Emitter& out, RunResult& result,
                  std::ostream& log) {
    const Trajectory traj = simulate_configured(cfg);
    std::optional<GrowthFit> fit;
    std::string fit_note;
    try {
        fit = measure_growth_rate(traj, cfg.simulate.fit_window);
    } catch (const InsufficientData& e) {
        fit_note = e.what();
    }

    Json record = base_record(cfg, prov);
    record["run"] = trajectory_json(traj, fit ? &*fit : nullptr, prov);
    record["run"].erase("provenance");
    if (!fit_note.empty()) record["growth_fit_note"] = fit_note;
    out.csv("trajectory.csv", trajectory_csv(traj, prov));
    out.json("run.json", record);

    if (cfg.wants("svg")) {
        Series p{"p", {}, {}, "#1f4e79"};
        const std::size_t stride = std::max<std::size_t>(1, traj.size() / 4000);
        for (std::size_t i = 0; i < traj.size(); i += stride) {
            p.x.push_back(traj.tau[i]);
            p.y.push_back(traj.p[i]);
        }
        Series env{"|p| at extrema", {}, {}, "#b40426"};
        for (const auto& e : find_extrema(traj)) {
            env.x.push_back(e.tau);
            env.y.push_back(e.amplitude);
        }
        out.svg("trajectory.svg",
                line_plot_svg({p, env}, "trajectory (" + std::string(model_name(cfg.simulate.model)) + ")",
                              "tau = omega0 t", "p (esu cm)", prov));
    }

    std::string line = "simulate: model=" + std::string(model_name(cfg.simulate.model)) +
                       " samples=" + std::to_string(traj.size());
    if (fit)
        line += " growth=" + g4(fit->omega_pp) + " 1/s (" + g4(fit->rate_per_omega0) +
                " omega0, r2=" + g4(fit->r_squared) + (fit->low_confidence ? ", low confidence" : "") +
                ")";
    else
        line += " growth=n/a (" + fit_note + ")";
    say(result, log, line);
}

void run_floquet_map(const RunConfig& cfg, const Provenance& prov, Emitter& out,
                     RunResult& result, std::ostream& log) {
    const double w0 = cfg.scenario.transition.omega0;
    StabilityMapOptions opts = cfg.floquet.map;
    opts.workers = cfg.workers;
    const StabilityMap map = stability_map(w0, floquet_gamma_ratio(cfg) * w0, opts);

    out.csv("stability_map.csv", stability_map_csv(map, prov));
    Json record = base_record(cfg, prov);
    Json body = stability_map_json(map, prov);
    body.erase("provenance");
    for (auto it = body.begin(); it != body.end(); ++it) record[it.key()] = it.value();
    out.json("stability_map.json", record);
    out.svg("stability_map.svg", stability_map_svg(map, prov));

    double max_exp = -INFINITY;
    for (double e : map.exponents) max_exp = std::max(max_exp, e);
    std::string line = "floquet-map: " + std::to_string(map.nu_axis.size()) + "x" +
                       std::to_string(map.a_axis.size()) + " cells, gamma/omega0=" +
                       g4(map.gamma_ratio) + ", max exponent=" + g4(max_exp) + " omega0";
    for (const auto& t : map.tongue_tips)
        line += ", N=" + std::to_string(t.order) + " tip at nu/omega0=" + g4(t.nu_ratio) +
                " A=" + g4(t.drive_amplitude);
    say(result, log, line);
}

void run_threshold(const RunConfig& cfg, const Provenance& prov, Emitter& out, RunResult& result,
                   std::ostream& log) {
    const Scenario& sc = cfg.scenario;
    const double w0 = sc.transition.omega0;
    const double g = floquet_gamma_ratio(cfg);
    const double closed = 4.0 * g;
    const double lhs = threshold_lhs(sc.transition, sc.grating, sc.medium);
    const double drive = mathieu_drive(cfg);

    Json record = base_record(cfg, prov);
    record["nu_ratio"] = json_number(cfg.floquet.nu_ratio);
    record["gamma_ratio"] = json_number(g);
    std::optional<double> a_th;
    if (g >= kMinResolvableGammaRatio) {
        const ThresholdResult t = threshold_amplitude(w0, g * w0, cfg.floquet.nu_ratio * w0,
                                                      cfg.floquet.map.steps_per_period);
        a_th = t.amplitude;
        record["A_th"] = a_th ? json_number(*a_th) : Json(nullptr);
        record["A_th_source"] = "floquet";
        record["bisection_evaluations"] = t.evaluations;
        if (!a_th) record["note"] = "stable up to the bracket top A = 1";
    } else {
        a_th = closed;
        record["A_th"] = json_number(closed);
        record["A_th_source"] = "closed_form";
        record["note"] = "gamma/omega0 below 1e-8: Floquet bisection not resolvable";
    }
    record["A_th_closed_form"] = json_number(closed);
    record["threshold_lhs"] = json_number(lhs);
    record["lhs_above_one"] = lhs > 1.0;
    record["drive_A"] = json_number(drive);
    record["drive_above_threshold"] = a_th ? drive > *a_th : false;
    out.json("threshold.json", record);

    say(result, log,
        "threshold: A_th=" + (a_th ? g4(*a_th) : std::string("none")) + " (" +
            record["A_th_source"].get<std::string>() + "), 4 gamma/omega0=" + g4(closed) +
            ", drive A=" + g4(drive) + ", LHS=" + g4(lhs));
}

void run_estimate(const RunConfig& cfg, const Provenance& prov, Emitter& out, RunResult& result,
                  std::ostream& log) {
    const ScenarioReport report = scenario_report(cfg.scenario);
    Json record = base_record(cfg, prov);
    Json body = report_json(report);
    for (auto it = body.begin(); it != body.end(); ++it) record[it.key()] = it.value();
    out.json("report.json", record);
    out.write("report.txt", "# parex " + prov.version + " config " + prov.config_hash + " seed " +
                                std::to_string(prov.seed) + "\n" + report_text(report));

    std::string line = "estimate: " + report.verdict + ", omega''=" + g4(report.growth.omega_pp) +
                       " 1/s, net=" + g4(report.growth.net_growth) + " 1/s";
    if (report.growth.excitation_length)
        line += ", excitation length=" + g4(*report.growth.excitation_length) + " cm";
    line += ", coherent bunch power=" +
            g4(BeamRadiationEstimate::watts(report.power.coherent_bunch_power)) + " W";
    say(result, log, line);
}

void run_sweep_command(const RunConfig& cfg, const Provenance& prov, Emitter& out,
                       RunResult& result, std::ostream& log) {
    const std::vector<SweepRow> rows = run_sweep(cfg);
    const std::string& param = cfg.sweep.parameter;

    CsvWriter csv(prov, {param, "omega_pp_measured", "omega_pp_formula", "ratio",
                         "net_measured", "net_formula", "threshold_lhs", "r_squared"});
    Json arr = Json::array();
    Series measured{"measured", {}, {}, "#b40426"};
    Series formula{"formula", {}, {}, "#3b4cc0"};
    for (const auto& r : rows) {
        const double ratio = r.omega_pp_formula != 0.0 ? r.omega_pp_measured / r.omega_pp_formula
                                                        : kNaN;
        csv.row(std::vector<double>{r.value, r.omega_pp_measured, r.omega_pp_formula, ratio,
                                    r.net_measured, r.net_formula, r.threshold_lhs,
                                    r.r_squared});
        arr.push_back({{param, json_number(r.value)},
                       {"omega_pp_measured", json_number(r.omega_pp_measured)},
                       {"omega_pp_formula", json_number(r.omega_pp_formula)},
                       {"ratio", json_number(ratio)},
                       {"net_measured", json_number(r.net_measured)},
                       {"net_formula", json_number(r.net_formula)},
                       {"threshold_lhs", json_number(r.threshold_lhs)},
                       {"r_squared", json_number(r.r_squared)}});
        measured.x.push_back(r.value);
        measured.y.push_back(r.omega_pp_measured);
        formula.x.push_back(r.value);
        formula.y.push_back(r.omega_pp_formula);
        say(result, log,
            "sweep: " + param + "=" + g4(r.value) + " omega''_measured=" +
                g4(r.omega_pp_measured) + " omega''_formula=" + g4(r.omega_pp_formula) +
                " ratio=" + g4(ratio));
    }
    out.csv("sweep.csv", csv.str());
    Json record = base_record(cfg, prov);
    record["parameter"] = param;
    record["scale"] = cfg.sweep.scale == SweepScale::log ? "log" : "linear";
    record["model"] = std::string(model_name(cfg.simulate.model));
    record["rows"] = arr;
    out.json("sweep.json", record);
    out.svg("sweep.svg", line_plot_svg({measured, formula}, "growth rate sweep", param,
                                       "omega'' (1/s)", prov));
}

}  // namespace

Provenance provenance_of(const RunConfig& config) {
    return Provenance{artifact_version(), config.hash(), config.seed};
}

Json config_json(const RunConfig& config) {
    Json j = Json::object();
    const std::string text = config.canonical();
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t end = text.find('\n', pos);
        const std::string line = text.substr(pos, end - pos);
        const std::size_t eq = line.find(" = ");
        j[line.substr(0, eq)] = line.substr(eq + 3);
        pos = end + 1;
    }
    return j;
}

Trajectory simulate_configured(const RunConfig& cfg) {
    const Scenario& sc = cfg.scenario;
    const DipoleTransition& t = sc.transition;
    SimulationOptions opts = cfg.simulate.options;
    opts.seed = cfg.seed;

    double p0 = 1.0;
    if (cfg.simulate.p0)
        p0 = *cfg.simulate.p0;
    else if (t.mode == TransitionMode::two_level)
        p0 = *t.dipole;
    InitialCondition ic{p0, 0.0};
    if (cfg.simulate.random_phase) ic = random_phase_ic(p0, cfg.seed);

    switch (cfg.simulate.model) {
        case ModelKind::linearized_mathieu: {
            const double nu = cfg.mathieu.nu_ratio ? *cfg.mathieu.nu_ratio * t.omega0
                                                   : sc.grating.modulation_frequency();
            if (!(nu > 0.0))
                throw ConfigError("simulate: mathieu model needs nu > 0 (beam speed or mathieu.nu_ratio)");
            return simulate_mathieu(t.omega0, mathieu_gamma(cfg), mathieu_drive(cfg), nu, ic, opts);
        }
        case ModelKind::exact_inverse_cube:
            return simulate_exact_modulation(t, sc.grating, sc.medium, ic, opts,
                                             sc.delta_n.value_or(1.0));
        case ModelKind::retarded:
            return simulate_retarded(t, sc.grating, sc.medium, ic, opts);
        case ModelKind::bloch: {
            const double dn = sc.delta_n.value_or(1.0);
            const double pump = cfg.simulate.delta_n_pump.value_or(dn);
            return simulate_bloch(t, sc.grating, sc.medium, pump, ExternalField::none(),
                                  BlochState{ic.p, ic.p_dot, dn}, opts);
        }
        case ModelKind::custom:
            break;
    }
    throw ConfigError("simulate: unsupported model");
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
    const std::vector<double> values = config.sweep.values();
    std::vector<RunConfig> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(with_value(config, config.sweep.parameter, v));

    std::vector<SweepRow> rows(values.size());
    parallel_for(values.size(), config.workers, [&](std::size_t i) {
        const RunConfig& cell = cells[i];
        const Scenario& sc = cell.scenario;
        SweepRow row;
        row.value = values[i];
        const GrowthEstimate g = growth_rate(sc.transition, sc.grating, sc.medium, sc.delta_n);
        const bool mathieu = cell.simulate.model == ModelKind::linearized_mathieu;
        const double damping = mathieu ? mathieu_gamma(cell) : g.amplitude_damping;
        row.omega_pp_formula =
            mathieu ? sc.transition.omega0 * mathieu_drive(cell) / 4.0 : g.omega_pp;
        row.net_formula = row.omega_pp_formula - damping;
        row.threshold_lhs = threshold_lhs(sc.transition, sc.grating, sc.medium);
        try {
            const GrowthFit fit =
                measure_growth_rate(simulate_configured(cell), cell.simulate.fit_window);
            row.net_measured = fit.omega_pp;
            row.omega_pp_measured = fit.omega_pp + damping;
            row.r_squared = fit.r_squared;
        } catch (const InsufficientData&) {
            row.net_measured = row.omega_pp_measured = row.r_squared = kNaN;
        }
        rows[i] = row;
    });
    return rows;
}

RunResult run(const RunConfig& config, std::ostream& log) {
    RunResult result;
    const Provenance prov = provenance_of(config);
    Emitter out(config, result);
    if (config.command == "simulate")
        run_simulate(config, prov, out, result, log);
    else if (config.command == "floquet-map")
        run_floquet_map(config, prov, out, result, log);
    else if (config.command == "threshold")
        run_threshold(config, prov, out, result, log);
    else if (config.command == "estimate")
        run_estimate(config, prov, out, result, log);
    else if (config.command == "sweep")
        run_sweep_command(config, prov, out, result, log);
    else
        throw ConfigError("unknown command '" + config.command + "'");
    return result;
}

}  // namespace parex
