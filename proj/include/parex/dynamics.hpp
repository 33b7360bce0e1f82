#pragma once

// Time-domain integration of the oscillator models and growth-rate
// extraction from the resulting trajectories.
//
// All integrators work in dimensionless time tau = omega0 t with a fixed-step
// RK4 scheme. `p_dot` in this module always means dp/dtau; multiply by omega0
// for the physical derivative.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parex/quantities.hpp"

namespace parex {

enum class ModelKind { linearized_mathieu, exact_inverse_cube, retarded, bloch, custom };

std::string_view model_name(ModelKind kind);
ModelKind parse_model(std::string_view name);  // mathieu | exact | retarded | bloch

struct ModulationModel {
    ModelKind kind = ModelKind::linearized_mathieu;
    double drive_amplitude = 0.0;  // A, linearized model only
    GratingKinematics geometry{};  // exact / retarded

    /// Throws for a >= 1; returns a warning when |A| >= 1.
    std::vector<std::string> validate() const;
};

struct InitialCondition {
    double p = 1.0;
    double p_dot = 0.0;  // dp/dtau
};

/// Amplitude-preserving initial condition with a phase drawn from `seed`.
InitialCondition random_phase_ic(double amplitude, std::uint64_t seed);

struct SimulationOptions {
    double periods = 100.0;  // horizon in units of 2 pi / omega0
    int steps_per_period = 256;
    int record_stride = 1;  // keep every n-th step
    std::uint64_t seed = 0;
};

struct RunMeta {
    ModelKind model = ModelKind::custom;
    double omega0 = 0.0;
    std::vector<std::pair<std::string, double>> parameters;
    int steps_per_period = 0;
    double periods = 0.0;
    int record_stride = 1;
    std::uint64_t seed = 0;
};

struct Trajectory {
    std::vector<double> tau;
    std::vector<double> p;
    std::vector<double> p_dot;
    std::vector<double> delta_n;  // Bloch runs only
    RunMeta meta;

    std::size_t size() const { return tau.size(); }
    bool has_delta_n() const { return !delta_n.empty(); }
};

struct BlochState {
    double p = 0.0;
    double p_dot = 0.0;  // dp/dtau
    /// Population difference per molecule, n1 - n2 normalized to the density.
    double delta_n = 0.0;
};

struct ExternalField {
    std::function<double(double)> waveform;  // statvolt/cm at physical time t (s)
    std::string description = "none";

    static ExternalField none();
};

/// Generic p'' + damping p' + stiffness(tau) p = 0 in dimensionless time.
Trajectory integrate_oscillator(double damping, const std::function<double(double)>& stiffness,
                                InitialCondition ic, const SimulationOptions& options,
                                RunMeta meta);

/// p_ddot + 2 gamma p_dot + omega0^2 (1 + A cos nu t) p = 0.
Trajectory simulate_mathieu(double omega0, double gamma, double drive_amplitude, double nu,
                            InitialCondition ic, const SimulationOptions& options);

/// Reduced equation with the full (1 + a cos nu t)^-3 distance dependence of
/// the frequency shift. Damping is the effective rate at R0; `delta_n`
/// scales the shift of a two-level transition.
Trajectory simulate_exact_modulation(const DipoleTransition& transition,
                                     const GratingKinematics& grating, const MediumPair& medium,
                                     InitialCondition ic, const SimulationOptions& options,
                                     double delta_n = 1.0);

/// Delay equation p_ddot + gamma p_dot + omega0^2 p = (e^2/m) E_b(t) with the
/// perfect-conductor boundary field taken at t - t1(t). The free-space
/// reaction enters as gamma p_dot. History before t = 0 is the frozen initial
/// state (p0, p_dot0, p_ddot = 0).
Trajectory simulate_retarded(const DipoleTransition& transition,
                             const GratingKinematics& grating, const MediumPair& medium,
                             InitialCondition ic, const SimulationOptions& options);

/// Modified Bloch equations for a two-level molecule above the grating.
Trajectory simulate_bloch(const DipoleTransition& transition, const GratingKinematics& grating,
                          const MediumPair& medium, double delta_n_pump,
                          const ExternalField& external, BlochState ic,
                          const SimulationOptions& options);

struct Extremum {
    double tau;
    double amplitude;  // |p|
};

/// Extrema of p located from sign changes of p_dot and refined on the cubic
/// Hermite interpolant between samples.
std::vector<Extremum> find_extrema(const Trajectory& trajectory);

inline constexpr double kDefaultFitWindow = 0.8;
inline constexpr double kLowConfidenceR2 = 0.9;
inline constexpr std::size_t kMinExtrema = 10;

struct GrowthFit {
    double omega_pp = 0.0;         // 1/s, negative = decay
    double rate_per_omega0 = 0.0;  // same, in units of omega0
    double r_squared = 0.0;
    std::size_t n_extrema = 0;
    bool low_confidence = false;
};

/// Least-squares slope of log|p| at the extrema inside the trailing
/// `fit_window` fraction of the run. Throws InsufficientData below 10 extrema.
GrowthFit measure_growth_rate(const Trajectory& trajectory,
                              double fit_window = kDefaultFitWindow);

}  // namespace parex
