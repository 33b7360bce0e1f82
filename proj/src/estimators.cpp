#include "parex/estimators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "parex/boundary_fields.hpp"
#include "parex/error.hpp"

namespace parex {

namespace {

template <class Fn>
auto attributed(const char* field, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.category(), std::string(field) + ": " + e.what());
    }
}

double population_scale(const DipoleTransition& t, std::optional<double> delta_n) {
    if (t.mode != TransitionMode::two_level) return 1.0;
    return delta_n.value_or(1.0);
}

}  // namespace

ParametricDrive drive_amplitude(const DipoleTransition& transition,
                                const GratingKinematics& grating, const MediumPair& medium,
                                std::optional<double> delta_n) {
    transition.validate();
    ParametricDrive out;
    const double dn = population_scale(transition, delta_n);
    if (transition.mode == TransitionMode::two_level) {
        out.source = DriveSource::two_level;
        out.delta_n = dn;
    }
    const double shift =
        effective_coefficients(transition, grating.standoff, medium, dn).freq_shift_sq;
    const double w0 = transition.omega0;
    out.amplitude = 3.0 * shift * grating.corrugation / (w0 * w0);
    if (grating.corrugation > kSmallCorrugationLimit)
        out.warnings.push_back("a > 0.3: drive amplitude from the small-a expansion is approximate");
    return out;
}

double threshold_lhs(const DipoleTransition& transition, const GratingKinematics& grating,
                     const MediumPair& medium) {
    const double ratio = transition.wavelength() / grating.standoff;
    const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
    return 9.0 * grating.corrugation * ratio * ratio * ratio /
           (256.0 * pi3 * std::pow(medium.eps1, 1.5));
}

double closed_form_threshold(const DipoleTransition& transition,
                             const GratingKinematics& grating, const MediumPair& medium) {
    const double damping =
        effective_coefficients(transition, grating.standoff, medium).damping_rate;
    return 2.0 * damping / transition.omega0;
}

std::optional<double> excitation_length(double speed, double omega_pp) {
    if (!(omega_pp > 0.0)) return std::nullopt;
    return speed / omega_pp;
}

GrowthEstimate growth_rate(const DipoleTransition& transition, const GratingKinematics& grating,
                           const MediumPair& medium, std::optional<double> delta_n) {
    const ParametricDrive drive = drive_amplitude(transition, grating, medium, delta_n);
    const double damping =
        effective_coefficients(transition, grating.standoff, medium).damping_rate;
    GrowthEstimate g;
    g.omega_pp = transition.omega0 * drive.amplitude / 4.0;
    g.amplitude_damping = 0.5 * damping;
    g.net_growth = g.omega_pp - g.amplitude_damping;
    g.excitation_length = excitation_length(grating.speed, g.omega_pp);
    g.above_threshold = g.omega_pp > 0.0 && g.net_growth > 0.0;
    return g;
}

BeamRadiationEstimate radiated_power(const DipoleTransition& transition, const Beam& beam,
                                     const Plate& plate, double standoff, double wavelength,
                                     double eps1) {
    if (!(beam.density >= 0.0)) throw DomainError("radiated_power: density must be >= 0");
    if (!(plate.width > 0.0 && plate.length > 0.0 && standoff > 0.0 && wavelength > 0.0))
        throw DomainError("radiated_power: geometric quantities must be positive");
    MediumPair medium;
    medium.eps1 = eps1;
    BeamRadiationEstimate out;
    out.density = beam.density;
    out.plate = plate;
    out.n_total = beam.density * plate.width * plate.length * standoff;
    out.n_bunch = beam.density * wavelength * wavelength * standoff;
    out.single_power = radiative_rate(transition, medium) * cgs.hbar * transition.omega0;
    out.incoherent_power = out.n_total * out.single_power;
    out.coherent_bunch_power = out.n_bunch * out.n_bunch * out.single_power;
    out.bunch_fits_plate = wavelength * wavelength <= plate.width * plate.length;
    return out;
}

ScenarioReport scenario_report(const Scenario& s) {
    ScenarioReport r;
    r.scenario = s;
    attributed("transition", [&] { s.transition.validate(); });
    attributed("medium", [&] { s.medium.validate(); });

    const DipoleTransition& t = s.transition;
    const GratingKinematics& g = s.grating;
    r.lambda0 = t.wavelength();
    r.gamma = attributed("transition.gamma", [&] { return linewidth(t, s.medium); });
    r.validity = assess_validity(t, g, s.medium);
    r.warnings = r.validity.warnings;

    r.threshold_lhs = threshold_lhs(t, g, s.medium);
    r.closed_form_threshold =
        attributed("threshold", [&] { return closed_form_threshold(t, g, s.medium); });

    const bool drifting = g.speed > 0.0;
    if (drifting) {
        r.drive = attributed("drive", [&] { return drive_amplitude(t, g, s.medium, s.delta_n); });
        r.growth = attributed("growth", [&] { return growth_rate(t, g, s.medium, s.delta_n); });
    } else {
        r.drive.source = t.mode == TransitionMode::two_level ? DriveSource::two_level
                                                             : DriveSource::classical;
        r.growth.amplitude_damping =
            0.5 * effective_coefficients(t, g.standoff, s.medium).damping_rate;
        r.growth.net_growth = -r.growth.amplitude_damping;
    }
    for (const auto& w : r.drive.warnings) r.warnings.push_back(w);
    if (r.growth.excitation_length)
        r.excitation_to_plate = *r.growth.excitation_length / s.plate.length;

    // Resonance: bare target and the target shifted by the static boundary term.
    ResonanceCheck& rc = r.resonance;
    rc.nu = g.modulation_frequency();
    rc.bare_target = 2.0 * t.omega0 / s.resonance_order;
    rc.bare_match = ResonanceSpec{s.resonance_order}.matches(rc.nu, t.omega0);
    const double dn = t.mode == TransitionMode::two_level ? s.delta_n.value_or(1.0) : 1.0;
    rc.static_shift_ratio = effective_coefficients(t, g.standoff, s.medium, dn).freq_shift_sq *
                            mean_inverse_cube(g.corrugation) / (t.omega0 * t.omega0);
    if (rc.static_shift_ratio < 1.0) {
        rc.shifted_omega = shifted_frequency(t, g, s.medium, dn);
        rc.shifted_target = 2.0 * *rc.shifted_omega / s.resonance_order;
        if (drifting) {
            rc.detuning = std::abs(s.resonance_order * rc.nu / 2.0 - *rc.shifted_omega);
            rc.within_first_tongue = s.resonance_order == 1 && *rc.detuning < r.growth.omega_pp;
        }
    } else {
        r.warnings.push_back(
            "static boundary shift exceeds omega0^2: the oscillator is statically unstable");
    }
    if (drifting && s.resonance_order == 1 && !rc.within_first_tongue) {
        std::ostringstream msg;
        msg << "grating frequency misses the shifted first tongue (detuning "
            << rc.detuning.value_or(0.0) << " 1/s vs half width " << r.growth.omega_pp
            << " 1/s); tune L to the shifted frequency";
        r.warnings.push_back(msg.str());
    }

    const double lambda = s.bunch_wavelength.value_or(r.lambda0);
    r.power = attributed("power", [&] {
        return radiated_power(t, s.beam, s.plate, g.standoff, lambda, s.medium.eps1);
    });

    if (!drifting)
        r.verdict = "no parametric drive";
    else
        r.verdict = r.growth.above_threshold ? "unstable" : "stable";
    return r;
}

}  // namespace parex
