#include "parex/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "parex/boundary_fields.hpp"
#include "parex/error.hpp"
#include "parex/integrator.hpp"

namespace parex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMinStepsPerPeriod = 64;

void check_options(const SimulationOptions& o) {
    if (o.steps_per_period < kMinStepsPerPeriod) {
        std::ostringstream msg;
        msg << "steps_per_period must be >= " << kMinStepsPerPeriod << " (got "
            << o.steps_per_period << ")";
        throw ConfigError(msg.str());
    }
    if (!(o.periods > 0.0) || !std::isfinite(o.periods))
        throw ConfigError("simulation horizon must be a positive number of periods");
    if (o.record_stride < 1) throw ConfigError("record_stride must be >= 1");
}

long long total_steps(const SimulationOptions& o) {
    return std::llround(o.periods * o.steps_per_period);
}

RunMeta base_meta(ModelKind kind, double omega0, const SimulationOptions& o) {
    RunMeta m;
    m.model = kind;
    m.omega0 = omega0;
    m.steps_per_period = o.steps_per_period;
    m.periods = o.periods;
    m.record_stride = o.record_stride;
    m.seed = o.seed;
    return m;
}

bool should_record(long long n, long long total, int stride) {
    return n % stride == 0 || n == total;
}

template <std::size_t N, class Rhs, class Record>
void drive(Rhs&& rhs, StateVec<N> y, const SimulationOptions& o, Record&& record) {
    const long long total = total_steps(o);
    const double h = kTwoPi / o.steps_per_period;
    record(0.0, y);
    for (long long n = 0; n < total; ++n) {
        const double tau = static_cast<double>(n) * h;
        y = rk4_step<N>(rhs, tau, y, h);
        if (should_record(n + 1, total, o.record_stride))
            record(static_cast<double>(n + 1) * h, y);
    }
}

void reserve(Trajectory& t, const SimulationOptions& o, bool with_delta_n) {
    const auto n = static_cast<std::size_t>(total_steps(o) / o.record_stride + 2);
    t.tau.reserve(n);
    t.p.reserve(n);
    t.p_dot.reserve(n);
    if (with_delta_n) t.delta_n.reserve(n);
}

}  // namespace

std::string_view model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::linearized_mathieu: return "mathieu";
        case ModelKind::exact_inverse_cube: return "exact";
        case ModelKind::retarded: return "retarded";
        case ModelKind::bloch: return "bloch";
        case ModelKind::custom: return "custom";
    }
    return "custom";
}

ModelKind parse_model(std::string_view name) {
    if (name == "mathieu") return ModelKind::linearized_mathieu;
    if (name == "exact") return ModelKind::exact_inverse_cube;
    if (name == "retarded") return ModelKind::retarded;
    if (name == "bloch") return ModelKind::bloch;
    throw ConfigError("unknown model '" + std::string(name) +
                      "' (expected mathieu|exact|retarded|bloch)");
}

std::vector<std::string> ModulationModel::validate() const {
    std::vector<std::string> warnings;
    if (kind == ModelKind::linearized_mathieu) {
        if (std::abs(drive_amplitude) >= 1.0)
            warnings.push_back("|A| >= 1: linearized Mathieu model outside its perturbative range");
    } else if (!(geometry.corrugation < 1.0)) {
        throw ConfigError("grating: corrugation amplitude must be < 1");
    }
    return warnings;
}

InitialCondition random_phase_ic(double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase_dist(0.0, kTwoPi);
    const double phase = phase_dist(rng);
    return {amplitude * std::cos(phase), -amplitude * std::sin(phase)};
}

ExternalField ExternalField::none() {
    return {[](double) { return 0.0; }, "none"};
}

// ---------------------------------------------------------------------------

Trajectory integrate_oscillator(double damping, const std::function<double(double)>& stiffness,
                                InitialCondition ic, const SimulationOptions& options,
                                RunMeta meta) {
    check_options(options);
    Trajectory out;
    out.meta = std::move(meta);
    reserve(out, options, false);
    auto rhs = [&](double tau, const StateVec<2>& y) -> StateVec<2> {
        return {y[1], -damping * y[1] - stiffness(tau) * y[0]};
    };
    drive<2>(rhs, StateVec<2>{ic.p, ic.p_dot}, options, [&](double tau, const StateVec<2>& y) {
        out.tau.push_back(tau);
        out.p.push_back(y[0]);
        out.p_dot.push_back(y[1]);
    });
    return out;
}

Trajectory simulate_mathieu(double omega0, double gamma, double drive_amplitude, double nu,
                            InitialCondition ic, const SimulationOptions& options) {
    if (!(omega0 > 0.0)) throw ConfigError("simulate_mathieu: omega0 must be positive");
    if (!(gamma >= 0.0)) throw ConfigError("simulate_mathieu: gamma must be >= 0");
    RunMeta meta = base_meta(ModelKind::linearized_mathieu, omega0, options);
    meta.parameters = {{"omega0", omega0}, {"gamma", gamma}, {"A", drive_amplitude}, {"nu", nu},
                       {"p0", ic.p}, {"p_dot0", ic.p_dot}};
    const double damping = 2.0 * gamma / omega0;
    const double nu_ratio = nu / omega0;
    return integrate_oscillator(
        damping, [=](double tau) { return 1.0 + drive_amplitude * std::cos(nu_ratio * tau); },
        ic, options, std::move(meta));
}

Trajectory simulate_exact_modulation(const DipoleTransition& transition,
                                     const GratingKinematics& grating, const MediumPair& medium,
                                     InitialCondition ic, const SimulationOptions& options,
                                     double delta_n) {
    if (!(grating.corrugation < 1.0))
        throw ConfigError("grating: corrugation amplitude must be < 1");
    const double w0 = transition.omega0;
    const EffectiveCoefficients k =
        effective_coefficients(transition, grating.standoff, medium, delta_n);
    const double damping = k.damping_rate / w0;
    const double shift = k.freq_shift_sq / (w0 * w0);
    const double a = grating.corrugation;
    const double nu_ratio = grating.modulation_frequency() / w0;

    RunMeta meta = base_meta(ModelKind::exact_inverse_cube, w0, options);
    meta.parameters = {{"omega0", w0},
                       {"damping_rate", k.damping_rate},
                       {"freq_shift_sq", k.freq_shift_sq},
                       {"R0", grating.standoff},
                       {"a", a},
                       {"nu", grating.modulation_frequency()},
                       {"eps1", medium.eps1},
                       {"p0", ic.p},
                       {"p_dot0", ic.p_dot}};
    return integrate_oscillator(
        damping,
        [=](double tau) {
            const double u = 1.0 + a * std::cos(nu_ratio * tau);
            return 1.0 - shift / (u * u * u);
        },
        ic, options, std::move(meta));
}

// ---------------------------------------------------------------------------

Trajectory simulate_retarded(const DipoleTransition& transition,
                             const GratingKinematics& grating, const MediumPair& medium,
                             InitialCondition ic, const SimulationOptions& options) {
    check_options(options);
    if (!(grating.corrugation < 1.0))
        throw ConfigError("grating: corrugation amplitude must be < 1");
    if (!medium.perfect_conductor())
        throw ConfigError("simulate_retarded: only the perfect-conductor surface is supported");

    const double w0 = transition.omega0;
    const double e2m = transition.charge_sq_over_mass();
    const double free_damping = linewidth(transition, medium) / w0;
    const double nu_ratio = grating.modulation_frequency() / w0;
    const double h = kTwoPi / options.steps_per_period;

    // Delay in tau units at the closest approach must span >= 4 steps.
    const double min_delay = w0 * retardation_time(grating.min_distance(), medium.eps1);
    if (min_delay < 4.0 * h) {
        const double needed = std::ceil(4.0 * kTwoPi / min_delay);
        std::ostringstream msg;
        msg << "retardation omega0*t1 = " << min_delay << " is resolved by fewer than 4 steps; "
            << "use steps_per_period >= " << static_cast<long long>(needed);
        throw ConfigError(msg.str());
    }

    const long long total = total_steps(options);
    // Node history in tau: p, p', p''.
    std::vector<double> hist_p, hist_q, hist_a;
    hist_p.reserve(static_cast<std::size_t>(total + 1));
    hist_q.reserve(static_cast<std::size_t>(total + 1));
    hist_a.reserve(static_cast<std::size_t>(total + 1));

    struct Retarded {
        double p, q, a;
    };
    auto history_at = [&](double tau_r) -> Retarded {
        if (tau_r <= 0.0) return {ic.p, ic.p_dot, 0.0};
        const double pos = tau_r / h;
        auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= hist_a.size()) i = hist_a.size() - 2;  // guarded by the delay check
        const double s = pos - static_cast<double>(i);
        const HermiteSample hs = quintic_hermite(hist_p[i], hist_q[i], hist_a[i], hist_p[i + 1],
                                                 hist_q[i + 1], hist_a[i + 1], h, s);
        return {hs.value, hs.first, hs.second};
    };

    auto rhs = [&](double tau, const StateVec<2>& y) -> StateVec<2> {
        const double cosv = std::cos(nu_ratio * tau);
        const double r = grating.standoff * (1.0 + grating.corrugation * cosv);
        const RetardedCoefficients c = retarded_field_coefficients(r, medium);
        const double delay = w0 * retardation_time(r, medium.eps1);
        const Retarded past = history_at(tau - delay);
        const double forcing =
            e2m * (c.p_ddot * past.a + c.p_dot * past.q / w0 + c.p * past.p / (w0 * w0));
        return {y[1], -free_damping * y[1] - y[0] + forcing};
    };

    Trajectory out;
    out.meta = base_meta(ModelKind::retarded, w0, options);
    out.meta.parameters = {{"omega0", w0},
                           {"e2_over_m", e2m},
                           {"gamma_free", free_damping * w0},
                           {"R0", grating.standoff},
                           {"a", grating.corrugation},
                           {"nu", grating.modulation_frequency()},
                           {"eps1", medium.eps1},
                           {"orientation",
                            medium.orientation == Orientation::perpendicular ? 0.0 : 1.0},
                           {"p0", ic.p},
                           {"p_dot0", ic.p_dot}};
    reserve(out, options, false);

    StateVec<2> y{ic.p, ic.p_dot};
    auto record = [&](long long n, const StateVec<2>& state) {
        if (!should_record(n, total, options.record_stride)) return;
        out.tau.push_back(static_cast<double>(n) * h);
        out.p.push_back(state[0]);
        out.p_dot.push_back(state[1]);
    };
    for (long long n = 0; n < total; ++n) {
        const double tau = static_cast<double>(n) * h;
        hist_p.push_back(y[0]);
        hist_q.push_back(y[1]);
        hist_a.push_back(0.0);  // filled from k1 below
        record(n, y);
        StateVec<2> k1{};
        // k1 only looks back >= 4 steps, so the placeholder is never read.
        y = rk4_step<2>(rhs, tau, y, h, &k1);
        hist_a.back() = k1[1];
    }
    record(total, y);
    return out;
}

// ---------------------------------------------------------------------------

Trajectory simulate_bloch(const DipoleTransition& transition, const GratingKinematics& grating,
                          const MediumPair& medium, double delta_n_pump,
                          const ExternalField& external, BlochState ic,
                          const SimulationOptions& options) {
    check_options(options);
    if (transition.mode != TransitionMode::two_level || !transition.dipole)
        throw ConfigError("simulate_bloch: requires a two-level transition");
    if (!(grating.corrugation < 1.0))
        throw ConfigError("grating: corrugation amplitude must be < 1");

    const double w0 = transition.omega0;
    const double d = *transition.dipole;
    const double gamma = linewidth(transition, medium) / w0;
    const EffectiveCoefficients k = effective_coefficients(transition, grating.standoff, medium);
    const double damping = k.damping_rate / w0;
    const double shift = k.freq_shift_sq / (w0 * w0);  // at delta_n = 1
    const double a = grating.corrugation;
    const double nu_ratio = grating.modulation_frequency() / w0;
    const double source_gain = 2.0 * d * d / (cgs.hbar * w0);
    const double population_gain = 2.0 / (cgs.hbar * w0);
    const auto& field = external.waveform;

    auto rhs = [&](double tau, const StateVec<3>& y) -> StateVec<3> {
        const double u = 1.0 + a * std::cos(nu_ratio * tau);
        const double e_ext = field ? field(tau / w0) : 0.0;
        const double n = y[2];
        return {y[1],
                -damping * y[1] - (1.0 - shift * n / (u * u * u)) * y[0] + source_gain * n * e_ext,
                -gamma * (n - delta_n_pump) - population_gain * e_ext * y[1]};
    };

    Trajectory out;
    out.meta = base_meta(ModelKind::bloch, w0, options);
    out.meta.parameters = {{"omega0", w0},
                           {"dipole", d},
                           {"gamma", gamma * w0},
                           {"damping_rate", k.damping_rate},
                           {"freq_shift_sq", k.freq_shift_sq},
                           {"R0", grating.standoff},
                           {"a", a},
                           {"nu", grating.modulation_frequency()},
                           {"eps1", medium.eps1},
                           {"delta_n_pump", delta_n_pump},
                           {"p0", ic.p},
                           {"p_dot0", ic.p_dot},
                           {"delta_n0", ic.delta_n}};
    reserve(out, options, true);
    drive<3>(rhs, StateVec<3>{ic.p, ic.p_dot, ic.delta_n}, options,
             [&](double tau, const StateVec<3>& y) {
                 out.tau.push_back(tau);
                 out.p.push_back(y[0]);
                 out.p_dot.push_back(y[1]);
                 out.delta_n.push_back(y[2]);
             });
    return out;
}

// ---------------------------------------------------------------------------

std::vector<Extremum> find_extrema(const Trajectory& t) {
    std::vector<Extremum> out;
    const std::size_t n = t.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double q0 = t.p_dot[i];
        const double q1 = t.p_dot[i + 1];
        // A zero slope at a node is counted once, as the right end of its interval.
        const bool crosses = (q0 > 0.0 && q1 <= 0.0) || (q0 < 0.0 && q1 >= 0.0);
        if (!crosses) continue;

        const double h = t.tau[i + 1] - t.tau[i];
        const double y0 = t.p[i], y1 = t.p[i + 1];
        const double d0 = h * q0, d1 = h * q1;
        // d/ds of the cubic Hermite: A s^2 + B s + C
        const double qa = 6 * y0 + 3 * d0 - 6 * y1 + 3 * d1;
        const double qb = -6 * y0 - 4 * d0 + 6 * y1 - 2 * d1;
        const double qc = d0;
        double s = q0 / (q0 - q1);  // linear fallback
        if (std::abs(qa) > 1e-14 * (std::abs(qb) + std::abs(qc))) {
            const double disc = qb * qb - 4 * qa * qc;
            if (disc >= 0.0) {
                const double root = std::sqrt(disc);
                const double sgn = qb >= 0.0 ? 1.0 : -1.0;
                const double qq = -0.5 * (qb + sgn * root);
                const double r1 = qq / qa;
                const double r2 = qq != 0.0 ? qc / qq : r1;
                if (r1 >= 0.0 && r1 <= 1.0)
                    s = r1;
                else if (r2 >= 0.0 && r2 <= 1.0)
                    s = r2;
            }
        } else if (qb != 0.0) {
            const double r = -qc / qb;
            if (r >= 0.0 && r <= 1.0) s = r;
        }
        const double amp = std::abs(cubic_hermite(y0, q0, y1, q1, h, s));
        if (amp > 0.0) out.push_back({t.tau[i] + s * h, amp});
    }
    return out;
}

GrowthFit measure_growth_rate(const Trajectory& trajectory, double fit_window) {
    if (!(fit_window > 0.0 && fit_window <= 1.0))
        throw ConfigError("fit_window must lie in (0, 1]");
    if (trajectory.size() < 2) throw InsufficientData("trajectory has fewer than two samples");

    const double t_first = trajectory.tau.front();
    const double t_last = trajectory.tau.back();
    const double t_start = t_last - fit_window * (t_last - t_first);

    std::vector<Extremum> all = find_extrema(trajectory);
    std::vector<Extremum> window;
    for (const auto& e : all)
        if (e.tau >= t_start) window.push_back(e);
    if (window.size() < kMinExtrema) {
        std::ostringstream msg;
        msg << "growth fit needs >= " << kMinExtrema << " extrema in the fit window, found "
            << window.size();
        throw InsufficientData(msg.str());
    }

    // Center the abscissa to keep the normal equations well conditioned.
    const auto count = static_cast<double>(window.size());
    double mean_t = 0.0, mean_y = 0.0;
    for (const auto& e : window) {
        mean_t += e.tau;
        mean_y += std::log(e.amplitude);
    }
    mean_t /= count;
    mean_y /= count;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (const auto& e : window) {
        const double dt = e.tau - mean_t;
        const double dy = std::log(e.amplitude) - mean_y;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    const double slope = sty / stt;
    const double ss_res = std::max(0.0, syy - slope * sty);

    GrowthFit fit;
    fit.rate_per_omega0 = slope;
    fit.omega_pp = slope * trajectory.meta.omega0;
    fit.n_extrema = window.size();
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.low_confidence = fit.r_squared < kLowConfidenceR2;
    return fit;
}

}  // namespace parex
