#include <doctest.h>

#include <cmath>
#include <complex>

#include "parex/boundary_fields.hpp"
#include "parex/dynamics.hpp"
#include "parex/error.hpp"

using namespace parex;

namespace {

constexpr double kC = 2.99792458e10;
constexpr double kPi = 3.141592653589793;

// Damped oscillator x'' + 2 g x' + x = 0, x(0) = 1, x'(0) = 0.
double damped_exact(double g, double tau) {
    const double wd = std::sqrt(1 - g * g);
    return std::exp(-g * tau) * (std::cos(wd * tau) + g / wd * std::sin(wd * tau));
}

Trajectory synthetic(double rate, double periods, int steps) {
    Trajectory t;
    const double h = 2 * kPi / steps;
    for (int n = 0; n <= static_cast<int>(periods * steps); ++n) {
        const double tau = n * h;
        const double env = std::exp(rate * tau);
        t.tau.push_back(tau);
        t.p.push_back(env * std::cos(tau));
        t.p_dot.push_back(env * (rate * std::cos(tau) - std::sin(tau)));
    }
    t.meta.omega0 = 2.0;
    return t;
}

// Root of s^2 + g s + 1 - (k2 s^2 + k1 s + k0) e^{-s x} = 0 near s, by Newton.
std::complex<double> delay_root(double g, double k2, double k1, double k0, double x,
                                std::complex<double> s) {
    for (int i = 0; i < 60; ++i) {
        const auto e = std::exp(-s * x);
        const auto q = k2 * s * s + k1 * s + k0;
        const auto f = s * s + g * s + 1.0 - q * e;
        const auto df = 2.0 * s + g - (2.0 * k2 * s + k1) * e + x * q * e;
        s -= f / df;
    }
    return s;
}

}  // namespace

TEST_CASE("free damped oscillator matches the analytic solution") {
    SimulationOptions o;
    o.periods = 50;
    o.steps_per_period = 512;
    const double g = 1e-3;
    const auto t = simulate_mathieu(1e11, g * 1e11, 0.0, 2e11, {1.0, 0.0}, o);
    CHECK(t.size() == 50 * 512 + 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); i += 97)
        worst = std::max(worst, std::abs(t.p[i] - damped_exact(g, t.tau[i])));
    // RK4 phase error, about h^5/120 per step over 25600 steps.
    CHECK(worst < 1e-7);
}

TEST_CASE("undamped, undriven amplitude is conserved") {
    SimulationOptions o;
    o.periods = 100;
    o.steps_per_period = 512;
    const auto t = simulate_mathieu(1.0, 0.0, 0.0, 2.0, {1.0, 0.0}, o);
    const double e = t.p.back() * t.p.back() + t.p_dot.back() * t.p_dot.back();
    CHECK(std::abs(std::sqrt(e) - 1.0) < 1e-8);
}

TEST_CASE("record stride keeps every n-th step and the endpoint") {
    SimulationOptions o;
    o.periods = 3;
    o.steps_per_period = 64;
    o.record_stride = 5;
    const auto t = simulate_mathieu(1.0, 0.0, 0.0, 2.0, {1.0, 0.0}, o);
    CHECK(t.tau.front() == 0.0);
    CHECK(t.tau.back() == doctest::Approx(3 * 2 * kPi));
    CHECK(t.tau[1] == doctest::Approx(5 * 2 * kPi / 64));
}

TEST_CASE("option sanity") {
    SimulationOptions o;
    o.steps_per_period = 32;
    CHECK_THROWS_AS(simulate_mathieu(1.0, 0.0, 0.0, 2.0, {1.0, 0.0}, o), ConfigError);
    o.steps_per_period = 256;
    o.periods = -1;
    CHECK_THROWS_AS(simulate_mathieu(1.0, 0.0, 0.0, 2.0, {1.0, 0.0}, o), ConfigError);
}

TEST_CASE("exact model with a = 0 equals the constant-stiffness oscillator bit for bit") {
    const auto tr = DipoleTransition::two_level(1e11, 46e-18);
    const auto g = GratingKinematics::make(1e-5, 0.0, 1e-3, 1e5);
    const MediumPair m;
    SimulationOptions o;
    o.periods = 20;
    const auto exact = simulate_exact_modulation(tr, g, m, {1.0, 0.0}, o);
    const auto k = effective_coefficients(tr, 1e-5, m);
    const double stiffness = 1.0 - k.freq_shift_sq / 1e22;
    const auto ref = integrate_oscillator(k.damping_rate / 1e11,
                                          [=](double) { return stiffness; }, {1.0, 0.0}, o, {});
    CHECK(exact.p == ref.p);
    CHECK(exact.p_dot == ref.p_dot);

    // And it oscillates at the shifted frequency.
    const auto ex = find_extrema(exact);
    REQUIRE(ex.size() > 4);
    const double half = (ex.back().tau - ex.front().tau) / (ex.size() - 1);
    CHECK(half == doctest::Approx(kPi / std::sqrt(stiffness)).epsilon(1e-6));
}

TEST_CASE("exact model reduces to the Mathieu form at small a") {
    // (1 + a cos)^-3 ~ 1 - 3 a cos: stiffness (1 - s)(1 + A cos) with A = 3 s a / (1 - s).
    const auto tr = DipoleTransition::two_level(1e11, 46e-18);
    const double a = 1e-3;
    const auto k = effective_coefficients(tr, 1e-5, MediumPair{});
    const double s = k.freq_shift_sq / 1e22;
    const double nu = 2 * std::sqrt(1 - s);
    const auto g = GratingKinematics::make(1e-5, a, tuned_period(1e5, nu * 1e11 / 2, 1), 1e5);
    SimulationOptions o;
    o.periods = 50;
    const auto exact = simulate_exact_modulation(tr, g, MediumPair{}, {1.0, 0.0}, o);
    const double A = 3 * s * a / (1 - s);
    const double ratio = g.modulation_frequency() / 1e11;
    const auto ref = integrate_oscillator(
        k.damping_rate / 1e11, [=](double tau) { return (1 - s) * (1 + A * std::cos(ratio * tau)); },
        {1.0, 0.0}, o, {});
    double gap = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        gap = std::max(gap, std::abs(exact.p[i] - ref.p[i]));
        scale = std::max(scale, std::abs(ref.p[i]));
    }
    CHECK(gap / scale <= 10 * a * a);
}

TEST_CASE("exact model delta_n scales the shift") {
    const auto tr = DipoleTransition::two_level(1e11, 46e-18);
    const auto g = GratingKinematics::make(1e-5, 0.0, 1e-3, 1e5);
    SimulationOptions o;
    o.periods = 10;
    const auto full = simulate_exact_modulation(tr, g, MediumPair{}, {1.0, 0.0}, o, 1.0);
    const auto none = simulate_exact_modulation(tr, g, MediumPair{}, {1.0, 0.0}, o, 0.0);
    CHECK(full.p != none.p);
    const auto free = simulate_mathieu(1e11, 0.5 * effective_coefficients(tr, 1e-5, MediumPair{}).damping_rate,
                                       0.0, 2e11, {1.0, 0.0}, o);
    CHECK(none.p.back() == doctest::Approx(free.p.back()).epsilon(1e-12));
}

TEST_CASE("extrema and growth fit on a synthetic exponential") {
    const auto t = synthetic(0.01, 60, 128);
    const auto ex = find_extrema(t);
    REQUIRE(ex.size() >= 100);
    // Extrema of e^{r tau} cos tau sit at tan tau = r.
    CHECK(ex[1].tau == doctest::Approx(kPi + std::atan(0.01)).epsilon(1e-6));
    const auto fit = measure_growth_rate(t);
    CHECK(fit.rate_per_omega0 == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(fit.omega_pp == doctest::Approx(0.02).epsilon(1e-6));
    CHECK(fit.r_squared > 0.999999);
    CHECK_FALSE(fit.low_confidence);

    const auto flat = measure_growth_rate(synthetic(0.0, 30, 128));
    CHECK(std::abs(flat.rate_per_omega0) < 1e-9);

    CHECK_THROWS_AS(measure_growth_rate(synthetic(0.01, 2, 128)), InsufficientData);
}

TEST_CASE("random phase initial condition") {
    const auto a = random_phase_ic(2.0, 42);
    const auto b = random_phase_ic(2.0, 42);
    const auto c = random_phase_ic(2.0, 43);
    CHECK(a.p == b.p);
    CHECK(a.p_dot == b.p_dot);
    CHECK(a.p != c.p);
    CHECK(std::hypot(a.p, a.p_dot) == doctest::Approx(2.0));
}

TEST_CASE("integration is deterministic") {
    SimulationOptions o;
    o.periods = 30;
    const auto a = simulate_mathieu(1e11, 1e8, 0.02, 2e11, {1.0, 0.3}, o);
    const auto b = simulate_mathieu(1e11, 1e8, 0.02, 2e11, {1.0, 0.3}, o);
    CHECK(a.p == b.p);
    CHECK(a.p_dot == b.p_dot);
}

TEST_CASE("retarded model decays at the characteristic root") {
    // Fictitious charge giving gamma/omega0 = 1e-4; kR = 0.1 so the delay
    // is resolved by the default step.
    const double w0 = 1e11;
    const double e2m = 1e-4 * 3 * kC * kC * kC / (2 * w0);
    const double charge = std::sqrt(e2m * 1e-27);
    const auto tr = DipoleTransition::classical(w0, charge, 1e-27);
    const double R = 0.1 * kC / w0;
    const auto g = GratingKinematics::make(R, 0.0, 1.0, 0.0);
    for (auto orient : {Orientation::perpendicular, Orientation::parallel}) {
        CAPTURE(static_cast<int>(orient));
        MediumPair m;
        m.orientation = orient;
        SimulationOptions o;
        o.periods = 3000;
        o.record_stride = 2;
        const auto traj = simulate_retarded(tr, g, m, {1.0, 0.0}, o);
        const auto fit = measure_growth_rate(traj, 0.5);

        const auto c = retarded_field_coefficients(R, m);
        const double x = 2 * R * w0 / kC;
        const double k1 = e2m * c.p_dot / w0;
        const double k0 = e2m * c.p / (w0 * w0);
        const double k2 = e2m * c.p_ddot;
        const std::complex<double> s =
            delay_root(1e-4, k2, k1, k0, x, {-5e-5, std::sqrt(1 - k0)});
        CHECK(fit.rate_per_omega0 == doctest::Approx(s.real()).epsilon(5e-3));
        // The root itself agrees with the effective damping.
        const double d = effective_coefficients(tr, R, m).damping_rate;
        CHECK(-s.real() == doctest::Approx(0.5 * d / w0).epsilon(2e-2));
    }
}

TEST_CASE("retarded model rejects an unresolved delay") {
    const auto tr = DipoleTransition::two_level(1e11, 1e-18);
    const auto g = GratingKinematics::make(1e-5, 0.1, 1e-3, 1e5);
    SimulationOptions o;
    CHECK_THROWS_WITH_AS(simulate_retarded(tr, g, MediumPair{}, {1.0, 0.0}, o),
                         doctest::Contains("steps_per_period"), ConfigError);
}

TEST_CASE("Bloch population relaxes at gamma") {
    auto tr = DipoleTransition::two_level(1e11, 1e-18);
    tr.gamma_override = 2e9;  // gamma / omega0 = 0.02
    const auto g = GratingKinematics::make(1e-5, 0.0, 1e-3, 1e5);
    SimulationOptions o;
    o.periods = 20;
    const auto t = simulate_bloch(tr, g, MediumPair{}, 0.3, ExternalField::none(),
                                  BlochState{1e-18, 0.0, 1.0}, o);
    REQUIRE(t.has_delta_n());
    for (std::size_t i = 0; i < t.size(); i += 211) {
        const double expected = 0.3 + 0.7 * std::exp(-0.02 * t.tau[i]);
        CHECK(std::abs(t.delta_n[i] - expected) < 1e-9);
    }
}

TEST_CASE("Bloch rejects a classical transition") {
    const auto tr = DipoleTransition::classical(1e11, 4.8e-10, 9.1e-28);
    const auto g = GratingKinematics::make(1e-5, 0.0, 1e-3, 1e5);
    CHECK_THROWS_AS(simulate_bloch(tr, g, MediumPair{}, 1.0, ExternalField::none(), {}, {}),
                    ConfigError);
}

TEST_CASE("Bloch external field pumps the population") {
    // A resonant field drives p; the work term moves delta_n.
    auto tr = DipoleTransition::two_level(1e11, 1e-18);
    tr.gamma_override = 0.0;
    const auto g = GratingKinematics::make(1.0, 0.0, 1e-3, 1e5);
    ExternalField f{[](double t) { return 1e3 * std::cos(1e11 * t); }, "cw"};
    SimulationOptions o;
    o.periods = 10;
    const auto t = simulate_bloch(tr, g, MediumPair{}, 1.0, f, BlochState{0.0, 0.0, 1.0}, o);
    CHECK(std::abs(t.p.back()) > 0.0);
    CHECK(t.delta_n.back() != 1.0);
}
