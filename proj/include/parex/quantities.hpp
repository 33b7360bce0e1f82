#pragma once

// Physical constants, the input-boundary unit conversions and the parameter
// types shared by every other module. Everything inside the library is in
// Gaussian CGS; SI-flavoured units are accepted only through from_si().

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace parex {

struct PhysicalConstants {
    double c;             // cm/s
    double hbar;          // erg s
    double e_electron;    // esu
    double m_electron;    // g
    double debye_to_cgs;  // esu cm per Debye
    double k_boltzmann;   // erg/K
};

/// CODATA 2018 values in Gaussian units.
inline constexpr PhysicalConstants cgs{
    2.99792458e10,
    1.054571817e-27,
    4.803204712570263e-10,
    9.1093837015e-28,
    1.0e-18,
    1.380649e-16,
};

// ---------------------------------------------------------------------------
// Unit conversion at the input boundary
// ---------------------------------------------------------------------------

enum class SiUnit { debye, micrometer, km_per_s, per_cm3, kelvin, hz_angular };

/// Multiplies by the fixed factor taking `unit` to its CGS counterpart.
double from_si(double value, SiUnit unit);
double to_si(double cgs_value, SiUnit unit);

/// Accepts "Debye"/"D", "um"/"micrometer", "km/s"/"km_per_s", "1/cm3"/"per_cm3",
/// "K"/"Kelvin", "rad/s"/"Hz_angular". Throws ConfigError otherwise.
SiUnit parse_si_unit(std::string_view name);
std::string_view unit_label(SiUnit unit);

// ---------------------------------------------------------------------------
// Parameter types
// ---------------------------------------------------------------------------

enum class TransitionMode { classical, two_level };

/// A dipole transition, parameterized classically (charge e, mass m) or as a
/// two-level system (matrix element d). When both are populated they must
/// satisfy e^2/m = 2 omega0 d^2 / hbar.
struct DipoleTransition {
    double omega0 = 0.0;  // rad/s
    TransitionMode mode = TransitionMode::two_level;
    std::optional<double> dipole;  // esu cm
    std::optional<double> charge;  // esu
    std::optional<double> mass;    // g
    /// Replaces the radiative rate wherever the dynamics need a linewidth.
    std::optional<double> gamma_override;  // 1/s

    static DipoleTransition classical(double omega0, double charge, double mass);
    static DipoleTransition two_level(double omega0, double dipole);

    /// Throws ConfigError when a required field is missing or the
    /// correspondence bridge fails by more than 1e-6 relative.
    void validate() const;

    double wavelength() const;  // 2 pi c / omega0
    /// e^2/m; two-level transitions go through the correspondence bridge.
    double charge_sq_over_mass() const;
};

struct GratingKinematics {
    double standoff = 0.0;     // R0, cm
    double corrugation = 0.0;  // a
    double period = 0.0;       // L, cm
    double speed = 0.0;        // v, cm/s

    /// Validating constructor. a >= 1 is a hard error (R(t) reaches the surface).
    static GratingKinematics make(double standoff, double corrugation, double period,
                                  double speed);

    double modulation_frequency() const;  // nu = 2 pi v / L
    double modulation_period() const;     // T = L / v; +inf for v = 0
    double distance(double t) const;      // R0 (1 + a cos nu t)
    double min_distance() const { return standoff * (1.0 - corrugation); }
};

enum class Orientation { perpendicular, parallel };

struct PerfectConductor {};
struct Dielectric {
    std::complex<double> eps2;
};
using Surface = std::variant<PerfectConductor, Dielectric>;

struct MediumPair {
    double eps1 = 1.0;
    Surface surface = PerfectConductor{};
    Orientation orientation = Orientation::perpendicular;

    void validate() const;
    bool perfect_conductor() const { return std::holds_alternative<PerfectConductor>(surface); }
};

struct ResonanceSpec {
    int order = 1;

    double required_omega0(double nu) const { return order * nu / 2.0; }
    /// nu == 2 omega0 / N within rel_tol.
    bool matches(double nu, double omega0, double rel_tol = 1e-6) const;
};

/// Regime flags. Only a >= 1 is fatal; the rest are reported as warnings.
struct ValidityReport {
    double near_zone_ratio = 0.0;  // R0 sqrt(eps1) / lambda0
    bool near_zone = false;        // near_zone_ratio < kNearZoneLimit
    bool standoff_below_period = false;
    bool small_corrugation = false;  // a <= 0.3
    std::vector<std::string> warnings;
};

inline constexpr double kNearZoneLimit = 0.1;
inline constexpr double kSmallCorrugationLimit = 0.3;

ValidityReport assess_validity(const DipoleTransition& transition,
                               const GratingKinematics& grating, const MediumPair& medium);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Free-space radiative rate gamma = 2 e^2 omega0^2 sqrt(eps1) / (3 m c^3).
double radiative_rate(const DipoleTransition& transition, const MediumPair& medium);

/// gamma_override when set, radiative_rate otherwise.
double linewidth(const DipoleTransition& transition, const MediumPair& medium);

struct ResonanceGeometry {
    double nu;       // rad/s
    double omega0;   // rad/s
    double lambda0;  // cm
};

ResonanceGeometry resonance_geometry(double speed, double period, int order);

/// Grating period that places nu = 2 omega / N.
double tuned_period(double speed, double omega, int order);

/// 1 - omega_p^2/omega^2 with omega_p^2 = 4 pi n_e e^2 / m_e. May be negative.
double plasma_epsilon(double electron_density, double omega);

/// Boltzmann two-level population difference tanh(hbar omega0 / 2 k T).
/// Not part of the growth-rate formulas; offered as a Delta n estimate.
double thermal_population_difference(double omega0, double temperature);

}  // namespace parex
