#include "parex/boundary_fields.hpp"

#include <cmath>

#include "parex/error.hpp"

namespace parex {

namespace {

bool perpendicular(const MediumPair& m) { return m.orientation == Orientation::perpendicular; }

void require_distance(double distance, const char* who) {
    if (!(distance > 0.0)) throw DomainError(std::string(who) + ": distance R must be positive");
}

// Boundary-to-free-space ratio of the radiative damping for a harmonic dipole,
// from Im of the retarded kernel at x = 2 k R. Series below x = 0.1 avoids the
// cancellation between sin x and x cos x.
double boundary_damping_ratio(double x, Orientation orientation) {
    const double x2 = x * x;
    if (orientation == Orientation::perpendicular) {
        if (x < 0.1) return 1.0 - x2 / 10.0 + x2 * x2 / 280.0 - x2 * x2 * x2 / 15120.0;
        return 3.0 * (std::sin(x) - x * std::cos(x)) / (x2 * x);
    }
    if (x < 0.1) return -1.0 + x2 / 5.0 - 3.0 * x2 * x2 / 280.0 + x2 * x2 * x2 / 3780.0;
    return 1.5 * ((1.0 - x2) * std::sin(x) - x * std::cos(x)) / (x2 * x);
}

}  // namespace

std::complex<double> image_factor(const MediumPair& medium) {
    if (medium.perfect_conductor()) return perpendicular(medium) ? 1.0 : -1.0;
    const std::complex<double> e1{medium.eps1, 0.0};
    const std::complex<double> e2 = std::get<Dielectric>(medium.surface).eps2;
    const std::complex<double> sum = e1 + e2;
    if (std::abs(sum) <= 1e-12 * (std::abs(e1) + std::abs(e2)))
        throw SurfacePlasmonPole("image_factor: eps1 + eps2 = 0 (surface-plasmon pole)");
    const std::complex<double> contrast = (e1 - e2) / sum;
    return perpendicular(medium) ? -contrast : contrast;
}

std::complex<double> image_dipole(double p, const MediumPair& medium) {
    return p * image_factor(medium);
}

std::complex<double> near_field(double p, double distance, const MediumPair& medium) {
    require_distance(distance, "near_field");
    if (!(medium.eps1 > 0.0)) throw DomainError("near_field: eps1 must be positive");
    const double prefactor = perpendicular(medium) ? 4.0 : -2.0;  // -(-/+3 - 1)
    const double r3 = distance * distance * distance;
    return prefactor * image_dipole(p, medium) / (16.0 * r3 * medium.eps1);
}

double retardation_time(double distance, double eps1) {
    return 2.0 * distance * std::sqrt(eps1) / cgs.c;
}

double free_space_field(double p_dddot, double eps1) {
    return 2.0 * p_dddot * std::sqrt(eps1) / (3.0 * cgs.c * cgs.c * cgs.c);
}

RetardedCoefficients retarded_field_coefficients(double distance, const MediumPair& medium) {
    require_distance(distance, "boundary_field_retarded");
    if (!medium.perfect_conductor())
        throw ConfigError("boundary_field_retarded: only the perfect-conductor surface is supported");
    const double c = cgs.c;
    const double r = distance;
    const double root_eps = std::sqrt(medium.eps1);
    // (1 -/+ 1), (3 -/+ 1)
    const double one_mp = perpendicular(medium) ? 0.0 : 2.0;
    const double three_mp = perpendicular(medium) ? 2.0 : 4.0;
    RetardedCoefficients k;
    k.p_ddot = one_mp / (4.0 * r * c * c);
    k.p_dot = 1.0 / (three_mp * r * r * c * root_eps);
    k.p = 1.0 / (2.0 * three_mp * r * r * r * medium.eps1);
    return k;
}

double boundary_field_retarded(const DipoleState& retarded, double distance,
                               const MediumPair& medium) {
    const RetardedCoefficients k = retarded_field_coefficients(distance, medium);
    return k.p_ddot * retarded.p_ddot + k.p_dot * retarded.p_dot + k.p * retarded.p;
}

EffectiveCoefficients effective_coefficients(const DipoleTransition& transition,
                                             double distance, const MediumPair& medium,
                                             double delta_n) {
    require_distance(distance, "effective_coefficients");
    const double e2m = transition.charge_sq_over_mass();
    const double gamma = linewidth(transition, medium);
    const double shift_scale = transition.mode == TransitionMode::two_level ? delta_n : 1.0;
    const double c = cgs.c;

    EffectiveCoefficients out;
    out.retardation = retardation_time(distance, medium.eps1);
    const std::complex<double> kernel = near_field(1.0, distance, medium);
    out.freq_shift_sq = e2m * shift_scale * kernel.real();

    if (medium.perfect_conductor()) {
        const double x = transition.omega0 * out.retardation;  // 2 k R
        out.damping_rate = gamma * (1.0 + boundary_damping_ratio(x, medium.orientation));
        out.inertia_correction = perpendicular(medium) ? e2m / (2.0 * distance * c * c)
                                                       : -e2m / (4.0 * distance * c * c);
    } else {
        out.image_loss_rate = e2m * shift_scale * kernel.imag() / (2.0 * transition.omega0);
        out.damping_rate = gamma + 2.0 * out.image_loss_rate;
    }
    return out;
}

double mean_inverse_cube(double corrugation) {
    const double a2 = corrugation * corrugation;
    return (2.0 + a2) / (2.0 * std::pow(1.0 - a2, 2.5));
}

double shifted_frequency(const DipoleTransition& transition, const GratingKinematics& grating,
                         const MediumPair& medium, double delta_n) {
    const double shift = effective_coefficients(transition, grating.standoff, medium, delta_n)
                             .freq_shift_sq *
                         mean_inverse_cube(grating.corrugation);
    const double w2 = transition.omega0 * transition.omega0 - shift;
    if (!(w2 > 0.0))
        throw DomainError("static boundary shift exceeds omega0^2: oscillator is statically unstable");
    return std::sqrt(w2);
}

}  // namespace parex
