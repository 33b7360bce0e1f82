#pragma once

// Closed-form drive amplitude, threshold, growth-rate and radiated-power
// estimates, and the scenario report that strings them together.

#include <optional>
#include <string>
#include <vector>

#include "parex/quantities.hpp"

namespace parex {

enum class DriveSource { classical, two_level };

struct ParametricDrive {
    double amplitude = 0.0;  // A
    DriveSource source = DriveSource::classical;
    std::optional<double> delta_n;  // two-level only
    std::vector<std::string> warnings;
};

/// A = 3 shift(R0) a / omega0^2. Perpendicular above a perfect conductor this
/// is 3 e^2 a / (4 m R0^3 omega0^2 eps1), or 3 d^2 a dn / (2 hbar R0^3 omega0 eps1)
/// for a two-level transition (dn defaults to 1).
ParametricDrive drive_amplitude(const DipoleTransition& transition,
                                const GratingKinematics& grating, const MediumPair& medium,
                                std::optional<double> delta_n = std::nullopt);

/// 9 a (lambda0/R0)^3 / (256 pi^3 eps1^(3/2)); > 1 means unstable at N = 1.
double threshold_lhs(const DipoleTransition& transition, const GratingKinematics& grating,
                     const MediumPair& medium);

/// Drive amplitude at which omega0 A / 4 equals the amplitude damping rate
/// (4 gamma / omega0 for the perpendicular orientation).
double closed_form_threshold(const DipoleTransition& transition,
                             const GratingKinematics& grating, const MediumPair& medium);

struct GrowthEstimate {
    double omega_pp = 0.0;          // omega0 A / 4, 1/s
    double amplitude_damping = 0.0; // D/2 from the effective coefficients
    double net_growth = 0.0;        // omega_pp - amplitude_damping
    std::optional<double> excitation_length;  // v / omega_pp, cm
    bool above_threshold = false;
};

GrowthEstimate growth_rate(const DipoleTransition& transition, const GratingKinematics& grating,
                           const MediumPair& medium,
                           std::optional<double> delta_n = std::nullopt);

/// v / omega_pp; empty for omega_pp <= 0.
std::optional<double> excitation_length(double speed, double omega_pp);

struct Beam {
    double density = 0.0;  // 1/cm^3
    double speed = 0.0;    // cm/s
};

struct Plate {
    double width = 1.0;    // cm
    double length = 10.0;  // cm
};

inline constexpr double kErgPerSecondPerWatt = 1.0e7;

struct BeamRadiationEstimate {
    double density = 0.0;
    double n_total = 0.0;   // molecules within R0 of the plate
    double n_bunch = 0.0;   // n lambda^2 R0
    double single_power = 0.0;      // W1 = gamma hbar omega0, erg/s
    double incoherent_power = 0.0;  // n_total W1, erg/s
    double coherent_bunch_power = 0.0;  // n_bunch^2 W1, erg/s
    Plate plate;
    bool bunch_fits_plate = true;

    static double watts(double erg_per_s) { return erg_per_s / kErgPerSecondPerWatt; }
};

/// Order-of-magnitude emission estimates. The active layer is one standoff
/// R0 thick over the plate area; W1 uses the radiative rate at `eps1`.
BeamRadiationEstimate radiated_power(const DipoleTransition& transition, const Beam& beam,
                                     const Plate& plate, double standoff, double wavelength,
                                     double eps1 = 1.0);

struct Scenario {
    DipoleTransition transition;
    GratingKinematics grating;
    MediumPair medium;
    Beam beam;
    Plate plate;
    int resonance_order = 1;
    std::optional<double> delta_n;            // two-level population difference
    std::optional<double> bunch_wavelength;   // defaults to lambda0
};

struct ResonanceCheck {
    double nu = 0.0;               // grating modulation frequency
    double bare_target = 0.0;      // 2 omega0 / N
    bool bare_match = false;       // within 1e-6 relative
    double static_shift_ratio = 0.0;        // shift(R0) <(1+a cos)^-3> / omega0^2
    std::optional<double> shifted_omega;    // empty when statically unstable
    std::optional<double> shifted_target;   // 2 shifted_omega / N
    /// |nu/2 - shifted_omega| against the first-tongue half width omega0 A / 4.
    std::optional<double> detuning;
    bool within_first_tongue = false;
};

struct ScenarioReport {
    Scenario scenario;
    std::string verdict;  // "unstable" | "stable" | "no parametric drive"
    ResonanceCheck resonance;
    ValidityReport validity;
    double gamma = 0.0;     // radiative rate (or override), 1/s
    double lambda0 = 0.0;
    double threshold_lhs = 0.0;
    double closed_form_threshold = 0.0;
    ParametricDrive drive;
    GrowthEstimate growth;
    std::optional<double> excitation_to_plate;  // excitation length / plate length
    BeamRadiationEstimate power;
    std::vector<std::string> warnings;
};

/// Throws the first component error prefixed with the field it came from.
ScenarioReport scenario_report(const Scenario& scenario);

}  // namespace parex
