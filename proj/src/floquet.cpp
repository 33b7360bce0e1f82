#include "parex/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "parex/error.hpp"
#include "parex/integrator.hpp"

namespace parex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> linear_axis(double lo, double hi, std::size_t n) {
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i)
        axis[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return axis;
}

void trace_contour(StabilityMap& map) {
    const std::size_t n_a = map.a_axis.size();
    for (std::size_t i = 0; i < map.nu_axis.size(); ++i) {
        if (map.at(i, 0) > kUnstableTolerance) {
            map.threshold_contour.push_back({map.nu_axis[i], map.a_axis[0]});
            continue;
        }
        for (std::size_t j = 0; j + 1 < n_a; ++j) {
            const double e0 = map.at(i, j);
            const double e1 = map.at(i, j + 1);
            if (e0 <= kUnstableTolerance && e1 > kUnstableTolerance) {
                double frac = e1 != e0 ? -e0 / (e1 - e0) : 0.0;
                frac = std::clamp(frac, 0.0, 1.0);
                const double a = map.a_axis[j] + frac * (map.a_axis[j + 1] - map.a_axis[j]);
                map.threshold_contour.push_back({map.nu_axis[i], a});
                break;
            }
        }
    }
}

// Each run of adjacent columns carrying a contour point is one tongue; its tip
// is the centre of the plateau of minimal threshold.
void detect_tips(StabilityMap& map) {
    const auto& contour = map.threshold_contour;
    if (contour.empty()) return;
    const double dnu = map.nu_axis.size() > 1 ? map.nu_axis[1] - map.nu_axis[0] : 1.0;
    const double tie = 1e-9 * std::max(1.0, std::abs(map.a_axis.back()));

    std::size_t start = 0;
    while (start < contour.size()) {
        std::size_t end = start + 1;
        while (end < contour.size() &&
               contour[end].nu_ratio - contour[end - 1].nu_ratio < 1.5 * dnu)
            ++end;

        std::size_t best = start;
        for (std::size_t k = start; k < end; ++k)
            if (contour[k].drive_amplitude < contour[best].drive_amplitude) best = k;
        std::size_t lo = best, hi = best;
        const double floor = contour[best].drive_amplitude + tie;
        while (lo > start && contour[lo - 1].drive_amplitude <= floor) --lo;
        while (hi + 1 < end && contour[hi + 1].drive_amplitude <= floor) ++hi;

        TongueTip tip{};
        tip.nu_ratio = 0.5 * (contour[lo].nu_ratio + contour[hi].nu_ratio);
        tip.drive_amplitude = contour[best].drive_amplitude;
        tip.order = std::max(1, static_cast<int>(std::lround(2.0 / tip.nu_ratio)));
        tip.label_offset = tip.nu_ratio - 2.0 / tip.order;
        map.tongue_tips.push_back(tip);
        start = end;
    }
}

}  // namespace

Monodromy monodromy(const MathieuParams& params, int steps_per_period) {
    if (!(params.nu > 0.0)) throw ConfigError("monodromy: nu must be positive");
    if (!(params.omega0 > 0.0)) throw ConfigError("monodromy: omega0 must be positive");
    if (steps_per_period < 256) throw ConfigError("monodromy: steps_per_period must be >= 256");

    const double nu_ratio = params.nu / params.omega0;
    const double damping = 2.0 * params.gamma / params.omega0;
    const double amp = params.drive_amplitude;
    const double period_tau = kTwoPi / nu_ratio;
    const double h = period_tau / steps_per_period;

    // Both fundamental columns advance together: (p1, q1, p2, q2).
    auto rhs = [&](double tau, const StateVec<4>& y) -> StateVec<4> {
        const double k = 1.0 + amp * std::cos(nu_ratio * tau);
        return {y[1], -damping * y[1] - k * y[0], y[3], -damping * y[3] - k * y[2]};
    };
    StateVec<4> y{1.0, 0.0, 0.0, 1.0};
    for (int n = 0; n < steps_per_period; ++n) y = rk4_step<4>(rhs, n * h, y, h);

    Monodromy m;
    m.matrix = {{{y[0], y[2]}, {y[1], y[3]}}};
    m.params = params;
    m.period = kTwoPi / params.nu;
    return m;
}

StabilityVerdict floquet_exponent(const Monodromy& m) {
    const double half_trace = 0.5 * m.trace();
    const std::complex<double> disc =
        std::sqrt(std::complex<double>(half_trace * half_trace - m.determinant(), 0.0));
    StabilityVerdict v;
    v.multipliers = {half_trace + disc, half_trace - disc};
    const double largest = std::max(std::abs(v.multipliers[0]), std::abs(v.multipliers[1]));
    v.exponent = std::log(largest) / m.period;
    v.stable = v.exponent < 0.0;
    return v;
}

double floquet_rate(const MathieuParams& params, int steps_per_period) {
    return floquet_exponent(monodromy(params, steps_per_period)).exponent / params.omega0;
}

ThresholdResult threshold_amplitude(double omega0, double gamma, double nu, int steps_per_period,
                                    double bracket_max, double rel_tol) {
    if (!(gamma > 0.0)) throw ConfigError("threshold_amplitude: gamma must be positive");
    if (!(bracket_max > 0.0)) throw ConfigError("threshold_amplitude: bracket must be positive");
    ThresholdResult out;
    out.bracket_max = bracket_max;
    auto exponent = [&](double a) {
        ++out.evaluations;
        return floquet_rate({omega0, gamma, a, nu}, steps_per_period);
    };
    if (exponent(bracket_max) <= 0.0) return out;

    double lo = 0.0, hi = bracket_max;
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (exponent(mid) > 0.0 ? hi : lo) = mid;
    }
    out.amplitude = hi;
    return out;
}

StabilityMap stability_map(double omega0, double gamma, const StabilityMapOptions& options) {
    if (options.n_nu < 8 || options.n_a < 8)
        throw ConfigError("stability_map: grid must be at least 8 x 8");
    if (!(options.nu_min > 0.0) || options.nu_max < options.nu_min)
        throw ConfigError("stability_map: need 0 < nu_min <= nu_max");
    if (options.a_max < options.a_min) throw ConfigError("stability_map: need A_min <= A_max");

    StabilityMap map;
    map.nu_axis = linear_axis(options.nu_min, options.nu_max, options.n_nu);
    map.a_axis = linear_axis(options.a_min, options.a_max, options.n_a);
    map.exponents.assign(options.n_nu * options.n_a, 0.0);
    map.gamma_ratio = gamma / omega0;

    parallel_for(map.exponents.size(), options.workers, [&](std::size_t cell) {
        const std::size_t i = cell / options.n_a;
        const std::size_t j = cell % options.n_a;
        const MathieuParams p{omega0, gamma, map.a_axis[j], map.nu_axis[i] * omega0};
        map.exponents[cell] = floquet_rate(p, options.steps_per_period);
    });

    trace_contour(map);
    detect_tips(map);
    return map;
}

}  // namespace parex
