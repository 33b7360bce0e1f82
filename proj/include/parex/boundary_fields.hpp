#pragma once

// Image-dipole near field, the retarded perfect-conductor boundary field,
// and the effective damping / frequency-shift coefficients they induce in
// the oscillator equation.
//
// Sign convention: where a formula carries a double sign, the upper sign
// belongs to the perpendicular orientation and the lower to the parallel one.

#include <complex>
#include <optional>

#include "parex/quantities.hpp"

namespace parex {

struct DipoleState {
    double p = 0.0;      // esu cm
    double p_dot = 0.0;  // esu cm / s
    double p_ddot = 0.0;
    std::optional<double> p_dddot;  // only the free-space term needs it
};

/// Weights of p_ddot, p_dot and p (all taken at t - t1) in the boundary field.
struct RetardedCoefficients {
    double p_ddot = 0.0;
    double p_dot = 0.0;
    double p = 0.0;
};

struct EffectiveCoefficients {
    /// Coefficient of p_dot in p_ddot + D p_dot + (omega0^2 - shift) p = 0.
    /// Amplitudes decay at D/2.
    double damping_rate = 0.0;
    double freq_shift_sq = 0.0;  // rad^2/s^2, positive = red shift
    double retardation = 0.0;    // t1 = 2 R sqrt(eps1) / c
    /// delta in (1 + delta) p_ddot from the retarded p_ddot term; not part of
    /// the reduced equation of motion, reported for completeness.
    double inertia_correction = 0.0;
    /// Extra amplitude damping from Im(eps2) (negative = anti-damping).
    /// Already folded into damping_rate; zero above a perfect conductor.
    double image_loss_rate = 0.0;
};

/// p'/p. Perfect conductor: +1 (perpendicular), -1 (parallel).
/// Throws SurfacePlasmonPole when eps1 + eps2 vanishes.
std::complex<double> image_factor(const MediumPair& medium);

std::complex<double> image_dipole(double p, const MediumPair& medium);

/// Instantaneous field of the image at the real dipole, -(-/+3 - 1) p' / (16 R^3 eps1).
std::complex<double> near_field(double p, double distance, const MediumPair& medium);

double retardation_time(double distance, double eps1);

/// 2 p_dddot sqrt(eps1) / (3 c^3).
double free_space_field(double p_dddot, double eps1);

RetardedCoefficients retarded_field_coefficients(double distance, const MediumPair& medium);

/// Perfect-conductor boundary field from the dipole state at t - t1.
double boundary_field_retarded(const DipoleState& retarded, double distance,
                               const MediumPair& medium);

/// Reduced equation-of-motion coefficients at standoff `distance`.
///
/// The frequency shift is the leading near-field term. The damping rate is
/// the free-space rate plus the boundary contribution from the retarded field
/// evaluated at omega0, so it tends to 2 gamma (perpendicular) or
/// gamma (2 k R)^2 / 5 (parallel) in the near zone and to gamma far away.
/// For two-level transitions `delta_n` scales the frequency shift.
EffectiveCoefficients effective_coefficients(const DipoleTransition& transition,
                                             double distance, const MediumPair& medium,
                                             double delta_n = 1.0);

/// Mean of (1 + a cos)^-3 over one period: (2 + a^2) / (2 (1 - a^2)^(5/2)).
double mean_inverse_cube(double corrugation);

/// Oscillation frequency with the period-averaged static shift removed:
/// sqrt(omega0^2 - shift(R0) <(1 + a cos)^-3>). Parametric resonance sits at
/// twice this value. Throws DomainError when the shift exceeds omega0^2.
double shifted_frequency(const DipoleTransition& transition, const GratingKinematics& grating,
                         const MediumPair& medium, double delta_n = 1.0);

}  // namespace parex
