#include "parex/quantities.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "parex/error.hpp"

namespace parex {

namespace {

double si_factor(SiUnit unit) {
    switch (unit) {
        case SiUnit::debye: return cgs.debye_to_cgs;
        case SiUnit::micrometer: return 1.0e-4;
        case SiUnit::km_per_s: return 1.0e5;
        case SiUnit::per_cm3: return 1.0;
        case SiUnit::kelvin: return 1.0;
        case SiUnit::hz_angular: return 1.0;
    }
    throw ConfigError("unknown unit");
}

bool close_rel(double x, double y, double tol) {
    return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y));
}

}  // namespace

double from_si(double value, SiUnit unit) {
    if (!std::isfinite(value)) throw ConfigError("from_si: value must be finite");
    return value * si_factor(unit);
}

double to_si(double cgs_value, SiUnit unit) { return cgs_value / si_factor(unit); }

SiUnit parse_si_unit(std::string_view name) {
    if (name == "Debye" || name == "D" || name == "debye") return SiUnit::debye;
    if (name == "um" || name == "micrometer") return SiUnit::micrometer;
    if (name == "km/s" || name == "km_per_s") return SiUnit::km_per_s;
    if (name == "1/cm3" || name == "per_cm3") return SiUnit::per_cm3;
    if (name == "K" || name == "Kelvin" || name == "kelvin") return SiUnit::kelvin;
    if (name == "rad/s" || name == "Hz_angular") return SiUnit::hz_angular;
    throw ConfigError("unknown unit '" + std::string(name) + "'");
}

std::string_view unit_label(SiUnit unit) {
    switch (unit) {
        case SiUnit::debye: return "Debye";
        case SiUnit::micrometer: return "um";
        case SiUnit::km_per_s: return "km/s";
        case SiUnit::per_cm3: return "1/cm3";
        case SiUnit::kelvin: return "K";
        case SiUnit::hz_angular: return "rad/s";
    }
    return "?";
}

// ---------------------------------------------------------------------------

DipoleTransition DipoleTransition::classical(double omega0, double charge, double mass) {
    DipoleTransition t;
    t.omega0 = omega0;
    t.mode = TransitionMode::classical;
    t.charge = charge;
    t.mass = mass;
    t.validate();
    return t;
}

DipoleTransition DipoleTransition::two_level(double omega0, double dipole) {
    DipoleTransition t;
    t.omega0 = omega0;
    t.mode = TransitionMode::two_level;
    t.dipole = dipole;
    t.validate();
    return t;
}

void DipoleTransition::validate() const {
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw ConfigError("transition: omega0 must be positive");
    if (mode == TransitionMode::two_level && !(dipole && *dipole > 0.0))
        throw ConfigError("transition: two-level mode requires a positive dipole matrix element");
    if (mode == TransitionMode::classical &&
        !(charge && mass && *charge > 0.0 && *mass > 0.0))
        throw ConfigError("transition: classical mode requires positive charge and mass");
    if (gamma_override && !(*gamma_override >= 0.0))
        throw ConfigError("transition: gamma override must be non-negative");
    if (dipole && charge && mass) {
        const double classical = (*charge) * (*charge) / (*mass);
        const double bridged = 2.0 * omega0 * (*dipole) * (*dipole) / cgs.hbar;
        if (!close_rel(classical, bridged, 1e-6)) {
            std::ostringstream msg;
            msg << "transition: e^2/m = " << classical << " disagrees with 2 omega0 d^2/hbar = "
                << bridged;
            throw ConfigError(msg.str());
        }
    }
}

double DipoleTransition::wavelength() const {
    return 2.0 * std::numbers::pi * cgs.c / omega0;
}

double DipoleTransition::charge_sq_over_mass() const {
    if (mode == TransitionMode::classical) {
        if (!charge || !mass) throw ConfigError("transition: classical mode lacks charge/mass");
        return (*charge) * (*charge) / (*mass);
    }
    if (!dipole) throw ConfigError("transition: two-level mode lacks a dipole matrix element");
    return 2.0 * omega0 * (*dipole) * (*dipole) / cgs.hbar;
}

// ---------------------------------------------------------------------------

GratingKinematics GratingKinematics::make(double standoff, double corrugation, double period,
                                          double speed) {
    if (!(standoff > 0.0)) throw ConfigError("grating: standoff distance must be positive");
    if (!(corrugation >= 0.0)) throw ConfigError("grating: corrugation amplitude must be >= 0");
    if (!(corrugation < 1.0)) throw ConfigError("grating: corrugation amplitude must be < 1");
    if (!(period > 0.0)) throw ConfigError("grating: period must be positive");
    if (!(speed >= 0.0)) throw ConfigError("grating: speed must be >= 0");
    return GratingKinematics{standoff, corrugation, period, speed};
}

double GratingKinematics::modulation_frequency() const {
    return 2.0 * std::numbers::pi * speed / period;
}

double GratingKinematics::modulation_period() const {
    if (speed == 0.0) return std::numeric_limits<double>::infinity();
    return period / speed;
}

double GratingKinematics::distance(double t) const {
    return standoff * (1.0 + corrugation * std::cos(modulation_frequency() * t));
}

void MediumPair::validate() const {
    if (!(eps1 > 0.0) || !std::isfinite(eps1))
        throw ConfigError("medium: eps1 must be positive");
    if (const auto* d = std::get_if<Dielectric>(&surface)) {
        if (!std::isfinite(d->eps2.real()) || !std::isfinite(d->eps2.imag()))
            throw ConfigError("medium: eps2 must be finite");
    }
}

bool ResonanceSpec::matches(double nu, double omega0, double rel_tol) const {
    const double target = 2.0 * omega0 / order;
    return std::abs(nu - target) <= rel_tol * target;
}

ValidityReport assess_validity(const DipoleTransition& transition,
                               const GratingKinematics& grating, const MediumPair& medium) {
    ValidityReport r;
    r.near_zone_ratio = grating.standoff * std::sqrt(medium.eps1) / transition.wavelength();
    r.near_zone = r.near_zone_ratio < kNearZoneLimit;
    r.standoff_below_period = grating.standoff < grating.period;
    r.small_corrugation = grating.corrugation <= kSmallCorrugationLimit;
    if (!r.near_zone) {
        std::ostringstream msg;
        msg << "outside near zone: R0 sqrt(eps1)/lambda0 = " << r.near_zone_ratio;
        r.warnings.push_back(msg.str());
    }
    if (!r.standoff_below_period)
        r.warnings.push_back("standoff R0 is not below the grating period L; grating averaging sets in");
    if (!r.small_corrugation)
        r.warnings.push_back("corrugation a > 0.3; the linearized drive amplitude is approximate");
    return r;
}

// ---------------------------------------------------------------------------

double radiative_rate(const DipoleTransition& transition, const MediumPair& medium) {
    if (medium.eps1 < 0.0) throw DomainError("radiative_rate: eps1 must be >= 0");
    const double w = transition.omega0;
    return 2.0 * transition.charge_sq_over_mass() * w * w * std::sqrt(medium.eps1) /
           (3.0 * cgs.c * cgs.c * cgs.c);
}

double linewidth(const DipoleTransition& transition, const MediumPair& medium) {
    if (transition.gamma_override) return *transition.gamma_override;
    return radiative_rate(transition, medium);
}

ResonanceGeometry resonance_geometry(double speed, double period, int order) {
    if (!(speed > 0.0) || !(period > 0.0))
        throw DomainError("resonance_geometry: speed and period must be positive");
    if (order < 1) throw DomainError("resonance_geometry: order must be >= 1");
    ResonanceGeometry g{};
    g.nu = 2.0 * std::numbers::pi * speed / period;
    g.omega0 = order * g.nu / 2.0;
    g.lambda0 = 2.0 * std::numbers::pi * cgs.c / g.omega0;
    return g;
}

double tuned_period(double speed, double omega, int order) {
    if (!(speed > 0.0) || !(omega > 0.0) || order < 1)
        throw DomainError("tuned_period: speed, omega and order must be positive");
    return std::numbers::pi * speed * order / omega;
}

double plasma_epsilon(double electron_density, double omega) {
    if (!(electron_density >= 0.0)) throw DomainError("plasma_epsilon: density must be >= 0");
    if (!(omega > 0.0)) throw DomainError("plasma_epsilon: omega must be positive");
    const double wp2 = 4.0 * std::numbers::pi * electron_density * cgs.e_electron *
                       cgs.e_electron / cgs.m_electron;
    return 1.0 - wp2 / (omega * omega);
}

double thermal_population_difference(double omega0, double temperature) {
    if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
    return std::tanh(cgs.hbar * omega0 / (2.0 * cgs.k_boltzmann * temperature));
}

}  // namespace parex
