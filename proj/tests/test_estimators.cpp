#include <doctest.h>

#include <cmath>
#include <random>

#include "parex/boundary_fields.hpp"
#include "parex/error.hpp"
#include "parex/estimators.hpp"
#include "parex/floquet.hpp"

using namespace parex;

namespace {

constexpr double kC = 2.99792458e10;
constexpr double kHbar = 1.054571817e-27;
constexpr double kPi = 3.141592653589793;
constexpr double kDebye = 1e-18;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Scenario baseline() {
    Scenario s;
    s.transition = DipoleTransition::two_level(1e11, kDebye);
    const double v = 1e5;
    const double L = tuned_period(v, 1e11, 1);
    s.grating = GratingKinematics::make(1e-5, 0.1, L, v);
    s.beam = Beam{1e17, v};
    s.plate = Plate{1.0, 10.0};
    return s;
}

}  // namespace

TEST_CASE("drive amplitude") {
    const auto s = baseline();
    const auto d = drive_amplitude(s.transition, s.grating, s.medium);
    const double expected = 3 * kDebye * kDebye * 0.1 / (2 * kHbar * 1e-15 * 1e11);
    CHECK(rel(d.amplitude, expected) < 1e-12);
    CHECK(d.amplitude == doctest::Approx(1.42e-6).epsilon(5e-3));
    CHECK(d.source == DriveSource::two_level);
    REQUIRE(d.delta_n);
    CHECK(*d.delta_n == 1.0);
    CHECK(d.warnings.empty());

    auto flat = s.grating;
    flat.corrugation = 0.0;
    CHECK(drive_amplitude(s.transition, flat, s.medium).amplitude == 0.0);

    auto rough = s.grating;
    rough.corrugation = 0.5;
    CHECK(drive_amplitude(s.transition, rough, s.medium).warnings.size() == 1);

    // Classical form 3 e^2 a / (4 m R0^3 omega0^2 eps1) through the bridge.
    const double e2m = 2 * 1e11 * kDebye * kDebye / kHbar;
    const auto cl = DipoleTransition::classical(1e11, std::sqrt(e2m * 1e-27), 1e-27);
    const double a_cl = drive_amplitude(cl, s.grating, s.medium).amplitude;
    CHECK(rel(a_cl, d.amplitude) < 1e-12);
    CHECK(rel(a_cl, 3 * e2m * 0.1 / (4 * 1e-15 * 1e22)) < 1e-12);

    const auto half = drive_amplitude(s.transition, s.grating, s.medium, 0.5);
    CHECK(rel(half.amplitude, 0.5 * d.amplitude) < 1e-14);
}

TEST_CASE("threshold LHS") {
    const auto s = baseline();
    const double pref = 9 * 0.1 / (256 * kPi * kPi * kPi);
    CHECK(pref == doctest::Approx(1.134e-4).epsilon(1e-3));
    const double lambda = 2 * kPi * kC / 1e11;
    CHECK(rel(threshold_lhs(s.transition, s.grating, s.medium),
              pref * std::pow(lambda / 1e-5, 3)) < 1e-12);

    // LHS = 1 at lambda0 / R0 = (1 / pref)^(1/3), about 20.7.
    const double crossover = std::cbrt(1 / pref);
    CHECK(crossover == doctest::Approx(20.66).epsilon(1e-3));
    auto g = s.grating;
    g.standoff = lambda / crossover;
    CHECK(threshold_lhs(s.transition, g, s.medium) == doctest::Approx(1.0).epsilon(1e-12));

    MediumPair half;
    half.eps1 = 0.5;
    CHECK(threshold_lhs(s.transition, s.grating, half) ==
          doctest::Approx(std::pow(2.0, 1.5) * threshold_lhs(s.transition, s.grating, s.medium)));
}

TEST_CASE("LHS > 1 coincides with A > 4 gamma / omega0") {
    const auto s = baseline();
    const double lambda = s.transition.wavelength();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ratio(5.0, 60.0), a(0.01, 0.3);
    for (int i = 0; i < 50; ++i) {
        auto g = s.grating;
        g.standoff = lambda / ratio(rng);
        g.corrugation = a(rng);
        const double lhs = threshold_lhs(s.transition, g, s.medium);
        const double amp = drive_amplitude(s.transition, g, s.medium).amplitude;
        const double gamma = radiative_rate(s.transition, s.medium);
        CHECK(amp / (4 * gamma / 1e11) == doctest::Approx(lhs).epsilon(1e-10));
    }
}

TEST_CASE("growth rate") {
    const auto s = baseline();
    const auto g = growth_rate(s.transition, s.grating, s.medium);
    const double expected = 3 * kDebye * kDebye * 0.1 / (8 * kHbar * 1e-15);
    CHECK(rel(g.omega_pp, expected) < 1e-12);
    CHECK(g.omega_pp == doctest::Approx(3.556e4).epsilon(1e-3));
    const double a = drive_amplitude(s.transition, s.grating, s.medium).amplitude;
    CHECK(rel(g.omega_pp, 1e11 * a / 4) < 1e-12);
    CHECK(g.above_threshold);
    REQUIRE(g.excitation_length);
    CHECK(*g.excitation_length == doctest::Approx(1e5 / expected));

    const auto none = growth_rate(s.transition, s.grating, s.medium, 0.0);
    CHECK(none.omega_pp == 0.0);
    CHECK_FALSE(none.above_threshold);
    CHECK_FALSE(none.excitation_length);

    const double gamma = radiative_rate(s.transition, s.medium);
    CHECK(g.amplitude_damping == doctest::Approx(gamma).epsilon(1e-6));
    CHECK(g.net_growth == doctest::Approx(g.omega_pp - g.amplitude_damping));
}

TEST_CASE("excitation length") {
    REQUIRE(excitation_length(1e5, 5e4));
    CHECK(*excitation_length(1e5, 5e4) == doctest::Approx(2.0));
    CHECK_FALSE(excitation_length(1e5, 0.0));
    CHECK_FALSE(excitation_length(1e5, -3.0));
}

TEST_CASE("growth scales as d squared") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d(0.1, 10.0), k(0.2, 5.0);
    auto s = baseline();
    for (int i = 0; i < 30; ++i) {
        const double d0 = d(rng) * kDebye, scale = k(rng);
        const auto t1 = DipoleTransition::two_level(1e11, d0);
        const auto t2 = DipoleTransition::two_level(1e11, scale * d0);
        const double w1 = growth_rate(t1, s.grating, s.medium).omega_pp;
        const double w2 = growth_rate(t2, s.grating, s.medium).omega_pp;
        CHECK(w2 / w1 == doctest::Approx(scale * scale).epsilon(1e-12));
    }
}

TEST_CASE("radiated power") {
    const auto t = DipoleTransition::two_level(1e11, kDebye);
    const auto est = radiated_power(t, Beam{1e17, 1e5}, Plate{1, 10}, 1e-5, 1.0);
    CHECK(est.n_total == doctest::Approx(1e13));
    CHECK(est.n_bunch == doctest::Approx(1e12));
    const double gamma = 2 * (2 * 1e11 * 1e-36 / kHbar) * 1e22 / (3 * kC * kC * kC);
    CHECK(rel(est.single_power, gamma * kHbar * 1e11) < 1e-12);
    CHECK(rel(est.coherent_bunch_power, 1e24 * est.single_power) < 1e-12);
    CHECK(rel(est.incoherent_power, 1e13 * est.single_power) < 1e-12);
    const double watts = BeamRadiationEstimate::watts(est.coherent_bunch_power);
    CHECK(watts > 1e-7);
    CHECK(watts < 1e-5);
    CHECK(BeamRadiationEstimate::watts(est.incoherent_power) == doctest::Approx(4.95e-18).epsilon(1e-2));
    CHECK(est.bunch_fits_plate);

    const auto empty = radiated_power(t, Beam{0.0, 1e5}, Plate{1, 10}, 1e-5, 1.0);
    CHECK(empty.n_total == 0.0);
    CHECK(empty.incoherent_power == 0.0);
    CHECK(empty.coherent_bunch_power == 0.0);

    CHECK_THROWS_AS(radiated_power(t, Beam{1e17, 1e5}, Plate{0, 10}, 1e-5, 1.0), DomainError);
}

TEST_CASE("baseline scenario report") {
    const auto r = scenario_report(baseline());
    CHECK(r.verdict == "unstable");
    CHECK(r.resonance.bare_match);
    CHECK(r.validity.near_zone);
    CHECK(r.threshold_lhs > 1.0);
    REQUIRE(r.excitation_to_plate);
    CHECK(*r.excitation_to_plate > 0.1);
    CHECK(*r.excitation_to_plate < 10.0);
    const double w = BeamRadiationEstimate::watts(r.power.coherent_bunch_power);
    CHECK(w > 1e-7);
    CHECK(w < 1e-4);
    // The static shift outruns the tongue when L is tuned to the bare omega0.
    CHECK(r.resonance.static_shift_ratio > r.drive.amplitude);
    CHECK_FALSE(r.resonance.within_first_tongue);
    REQUIRE(r.resonance.shifted_omega);
    CHECK(*r.resonance.shifted_omega < 1e11);
}

TEST_CASE("tuning to the shifted frequency lands inside the tongue") {
    auto s = baseline();
    const double wbar = shifted_frequency(s.transition, s.grating, s.medium);
    s.grating.period = tuned_period(s.beam.speed, wbar, 1);
    const auto r = scenario_report(s);
    CHECK(r.resonance.within_first_tongue);
    CHECK(*r.resonance.detuning < 1e-6 * wbar);
}

TEST_CASE("small corrugation is stable") {
    auto s = baseline();
    s.grating.corrugation = 1e-4;
    // Still far above threshold at these parameters.
    CHECK(scenario_report(s).threshold_lhs > 1e8);
    s.grating.corrugation = 1e-13;
    const auto r = scenario_report(s);
    CHECK(r.threshold_lhs < 1.0);
    CHECK(r.verdict == "stable");
    CHECK_FALSE(r.growth.above_threshold);
}

TEST_CASE("zero velocity has no drive") {
    auto s = baseline();
    s.grating.speed = 0.0;
    s.beam.speed = 0.0;
    const auto r = scenario_report(s);
    CHECK(r.verdict == "no parametric drive");
    CHECK(r.drive.amplitude == 0.0);
    CHECK(r.growth.omega_pp == 0.0);
    CHECK(r.resonance.nu == 0.0);
}

TEST_CASE("component errors carry the field") {
    auto s = baseline();
    s.medium.surface = Dielectric{{-1.0, 0.0}};
    try {
        scenario_report(s);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::domain);
        CHECK(std::string(e.what()).rfind("threshold: ", 0) == 0);
    }
    auto bad = baseline();
    bad.medium.eps1 = -2.0;
    CHECK_THROWS_WITH(scenario_report(bad), doctest::Contains("medium: "));
}

TEST_CASE("estimator growth agrees with the Floquet exponent") {
    // Large dipole and linewidth so both sides are well resolved.
    auto t = DipoleTransition::two_level(1e11, 46 * kDebye);
    t.gamma_override = 5e7;
    MediumPair m;
    for (double a : {0.1, 0.2, 0.3}) {
        const auto g = GratingKinematics::make(1e-5, a, 1.0, 1e5);
        const auto est = growth_rate(t, g, m);
        const double amp = drive_amplitude(t, g, m).amplitude;
        REQUIRE(amp <= 0.05);
        const double damping = 0.5 * effective_coefficients(t, 1e-5, m).damping_rate;
        const double fl = floquet_exponent(monodromy({1e11, damping, amp, 2e11})).exponent;
        CHECK(est.net_growth == doctest::Approx(fl).epsilon(0.05));
    }
}
