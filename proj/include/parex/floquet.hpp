#pragma once

// Monodromy-matrix stability analysis of the damped Mathieu equation
//   p_ddot + 2 gamma p_dot + omega0^2 (1 + A cos nu t) p = 0.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace parex {

struct MathieuParams {
    double omega0 = 1.0;
    double gamma = 0.0;
    double drive_amplitude = 0.0;  // A
    double nu = 2.0;
};

inline constexpr int kDefaultMonodromySteps = 1024;

/// One-period state-transition matrix on (p, p_dot / omega0).
struct Monodromy {
    std::array<std::array<double, 2>, 2> matrix{};
    MathieuParams params;
    double period = 0.0;  // T = 2 pi / nu, seconds

    double trace() const { return matrix[0][0] + matrix[1][1]; }
    double determinant() const {
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
    }
};

struct StabilityVerdict {
    double exponent = 0.0;  // max ln|mu| / T, 1/s
    std::array<std::complex<double>, 2> multipliers{};
    bool stable = true;     // exponent < 0
};

Monodromy monodromy(const MathieuParams& params, int steps_per_period = kDefaultMonodromySteps);

StabilityVerdict floquet_exponent(const Monodromy& m);

/// Convenience: exponent of monodromy(params) in units of omega0.
double floquet_rate(const MathieuParams& params, int steps_per_period = kDefaultMonodromySteps);

struct ThresholdResult {
    /// Smallest unstable A found; empty when the system is stable up to the
    /// bracket top.
    std::optional<double> amplitude;
    double bracket_max = 1.0;
    int evaluations = 0;
};

/// Bisection on A over [0, bracket_max] for the sign change of the exponent.
/// Requires gamma > 0.
ThresholdResult threshold_amplitude(double omega0, double gamma, double nu,
                                    int steps_per_period = kDefaultMonodromySteps,
                                    double bracket_max = 1.0, double rel_tol = 1e-4);

struct StabilityMapOptions {
    double nu_min = 0.5;  // nu / omega0
    double nu_max = 2.5;
    double a_min = 0.0;
    double a_max = 0.3;
    std::size_t n_nu = 64;
    std::size_t n_a = 32;
    int steps_per_period = kDefaultMonodromySteps;
    unsigned workers = 1;
};

struct ContourPoint {
    double nu_ratio;
    double drive_amplitude;
};

struct TongueTip {
    double nu_ratio;
    double drive_amplitude;  // lowest unstable A seen along the tongue
    int order;               // nearest N with nu/omega0 = 2/N
    double label_offset;     // nu_ratio - 2/N
};

/// Exponents above this (units of omega0) count as unstable when tracing
/// contours and tongues; below it lies integrator noise for gamma = 0.
inline constexpr double kUnstableTolerance = 1e-9;

struct StabilityMap {
    std::vector<double> nu_axis;  // nu / omega0
    std::vector<double> a_axis;   // A
    /// Growth exponents in units of omega0, index [i_nu * n_a + i_a].
    std::vector<double> exponents;
    std::vector<ContourPoint> threshold_contour;
    std::vector<TongueTip> tongue_tips;
    double gamma_ratio = 0.0;

    double at(std::size_t i_nu, std::size_t i_a) const {
        return exponents[i_nu * a_axis.size() + i_a];
    }
};

/// Evaluates the exponent on the (nu, A) grid, traces the zero contour along
/// each A column and detects tongue tips. Grid must be at least 8 x 8.
StabilityMap stability_map(double omega0, double gamma, const StabilityMapOptions& options);

}  // namespace parex
