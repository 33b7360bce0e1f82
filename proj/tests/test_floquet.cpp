#include <doctest.h>

#include <cmath>
#include <random>

#include "parex/error.hpp"
#include "parex/floquet.hpp"

using namespace parex;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_CASE("undriven undamped monodromy is a rotation") {
    const double nu = 2.3;
    const auto m = monodromy({1.0, 0.0, 0.0, nu});
    const double th = 2 * kPi / nu;
    CHECK(m.period == doctest::Approx(th));
    CHECK(m.matrix[0][0] == doctest::Approx(std::cos(th)).epsilon(1e-10));
    CHECK(m.matrix[0][1] == doctest::Approx(std::sin(th)).epsilon(1e-10));
    CHECK(m.matrix[1][0] == doctest::Approx(-std::sin(th)).epsilon(1e-10));
    CHECK(m.matrix[1][1] == doctest::Approx(std::cos(th)).epsilon(1e-10));
    const auto v = floquet_exponent(m);
    CHECK(std::abs(v.exponent) < 1e-10);
    CHECK(std::abs(std::abs(v.multipliers[0]) - 1.0) < 1e-10);
}

TEST_CASE("determinant follows Abel's identity") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> A(0.0, 0.5), nu(0.4, 3.0), g(0.0, 0.05);
    for (int i = 0; i < 50; ++i) {
        const MathieuParams p{1e11, g(rng) * 1e11, A(rng), nu(rng) * 1e11};
        const auto m = monodromy(p);
        const double expected = std::exp(-2 * p.gamma * m.period);
        CHECK(m.determinant() == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("without drive the exponent is minus gamma") {
    for (double g : {1e-4, 1e-3, 1e-2}) {
        const double e = floquet_rate({1.0, g, 0.0, 2.0});
        CHECK(e == doctest::Approx(-g).epsilon(1e-8));
    }
    // Physical units: exponent in 1/s.
    const auto v = floquet_exponent(monodromy({1e11, 1e8, 0.0, 2e11}));
    CHECK(v.exponent == doctest::Approx(-1e8).epsilon(1e-8));
    CHECK(v.stable);
}

TEST_CASE("first tongue growth is A/4 - gamma for small A") {
    for (double A : {0.01, 0.02, 0.04}) {
        const double e = floquet_rate({1.0, 1e-3, A, 2.0});
        CHECK(e == doctest::Approx(A / 4 - 1e-3).epsilon(0.03));
    }
}

TEST_CASE("threshold bisection") {
    const auto t = threshold_amplitude(1.0, 1e-3, 2.0);
    REQUIRE(t.amplitude);
    CHECK(*t.amplitude == doctest::Approx(4e-3).epsilon(0.02));
    CHECK(floquet_rate({1.0, 1e-3, *t.amplitude, 2.0}) > 0.0);
    CHECK(floquet_rate({1.0, 1e-3, *t.amplitude * (1 - 1e-3), 2.0}) <= 0.0);

    // Far from every tongue nothing goes unstable inside a small bracket.
    const auto none = threshold_amplitude(1.0, 1e-2, 3.0, 1024, 0.05);
    CHECK_FALSE(none.amplitude);
    CHECK(none.evaluations == 1);

    CHECK_THROWS_AS(threshold_amplitude(1.0, 0.0, 2.0), ConfigError);
}

TEST_CASE("input sanity") {
    CHECK_THROWS_AS(monodromy({1.0, 0.0, 0.1, 2.0}, 128), ConfigError);
    CHECK_THROWS_AS(monodromy({1.0, 0.0, 0.1, 0.0}), ConfigError);
    StabilityMapOptions o;
    o.n_nu = 7;
    CHECK_THROWS_AS(stability_map(1.0, 1e-3, o), ConfigError);
}

TEST_CASE("map with zero drive is uniformly minus gamma") {
    StabilityMapOptions o;
    o.n_nu = 8;
    o.n_a = 8;
    o.a_min = o.a_max = 0.0;
    const auto map = stability_map(1e11, 1e8, o);
    REQUIRE(map.exponents.size() == 64);
    for (double e : map.exponents) CHECK(e == doctest::Approx(-1e-3).epsilon(1e-8));
    CHECK(map.threshold_contour.empty());
    CHECK(map.tongue_tips.empty());
}

TEST_CASE("map finds the first three tongues") {
    StabilityMapOptions o;
    o.nu_min = 0.55;
    o.nu_max = 2.2;
    o.n_nu = 166;
    o.a_min = 0.0;
    o.a_max = 0.6;
    o.n_a = 13;
    const auto map = stability_map(1.0, 1e-3, o);
    REQUIRE(map.tongue_tips.size() == 3);
    int found = 0;
    for (const auto& tip : map.tongue_tips) {
        CHECK(std::abs(tip.label_offset) < 0.02);
        found |= 1 << tip.order;
        if (tip.order == 1) CHECK(tip.drive_amplitude < 0.05);
    }
    CHECK(found == ((1 << 1) | (1 << 2) | (1 << 3)));
}

TEST_CASE("map does not depend on the worker count") {
    StabilityMapOptions o;
    o.n_nu = 24;
    o.n_a = 10;
    const auto one = stability_map(1.0, 1e-3, o);
    o.workers = 3;
    const auto three = stability_map(1.0, 1e-3, o);
    CHECK(one.exponents == three.exponents);
    CHECK(one.tongue_tips.size() == three.tongue_tips.size());
}
