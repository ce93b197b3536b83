#include "phasesep/material.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace phasesep;
using namespace phasesep::material;
using namespace test_support;

TEST_CASE("double well and G")
{
    CHECK(F_prime(0.0) == 0.0);
    CHECK(F_prime(1.0) == 0.0);
    CHECK(F_prime(-1.0) == 0.0);
    CHECK(F_val(1.0) == -0.25);
    CHECK(F_prime(2.0) == 6.0);
    CHECK(G_prime(0.0) == 0.0);
    CHECK(G_val(-1.0) == 0.5);

    // Derivatives against centred differences, step 1e-4.
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    const double h = 1e-4;
    for (int n = 0; n < 100; ++n) {
        const double c = dist(rng);
        const double fd_f = (F_val(c + h) - F_val(c - h)) / (2 * h);
        const double fd_g = (G_val(c + h) - G_val(c - h)) / (2 * h);
        CHECK(std::abs(fd_f - F_prime(c)) <= 1e-6 * std::max(1.0, std::abs(F_prime(c))));
        CHECK(std::abs(fd_g - G_prime(c)) <= 1e-6 * std::max(1.0, std::abs(c)));
        CHECK(G_prime(c) == c);
    }
}

TEST_CASE("effective temperature")
{
    CHECK(effective_u(1.0, 0.0) == 1.0);
    CHECK(effective_u(0.5, 1.0) == 1.5);
    for (double w : {-3.0, -0.1, 0.0, 0.7})
        CHECK(effective_u(0.2, w) >= 0.2);
}

TEST_CASE("bulk potential W")
{
    CHECK(W_second(0.0, 1.0, 1.0) == 0.0);
    CHECK(W_second(0.0, 0.0, 1.0) == -1.0);
    // Minima at +-sqrt((theta0 - u) / theta0): located by bisection on W'.
    for (double u : {0.0, 0.3, 0.75}) {
        double lo = 0.2, hi = 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (W_prime(mid, u, 1.0) < 0.0 ? lo : hi) = mid;
        }
        CHECK(lo == doctest::Approx(std::sqrt(1.0 - u)).epsilon(1e-12));
        CHECK(W_prime(-lo, u, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    }
    // W'' vanishes at the spinodal points.
    for (double u : {0.0, 0.5}) {
        const double c1 = *spinodal_interval(1.0, u).c1;
        CHECK(std::abs(W_second(c1, u, 1.0)) < 1e-12);
        CHECK(std::abs(W_second(-c1, u, 1.0)) < 1e-12);
    }
}

TEST_CASE("spinodal interval")
{
    CHECK_FALSE(spinodal_interval(1.0, 2.0).separates);
    CHECK_FALSE(spinodal_interval(1.0, 1.0).separates);
    const SpinodalResult r = spinodal_interval(1.0, 0.0);
    REQUIRE(r.separates);
    CHECK(*r.c1 == doctest::Approx(0.577350).epsilon(1e-6));
    CHECK_THROWS_AS(spinodal_interval(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(spinodal_interval(-1.0, 0.5), std::invalid_argument);
}

TEST_CASE("mobility, viscosity and conductivity")
{
    MaterialParams p;
    p.mobility = {MobilityModel::Kind::Degenerate, 2.0};
    CHECK(mobility(1.0, p) == 0.0);
    CHECK(mobility(-1.0, p) == 0.0);
    CHECK(mobility(0.0, p) == 2.0);
    CHECK(mobility(1.5, p) == 0.0);
    p.mobility.kind = MobilityModel::Kind::Constant;
    CHECK(mobility(0.3, p) == 2.0);

    p.nu_a = 0.2;
    p.nu_b = 0.6;
    CHECK(viscosity(-1.0, p) == 0.2);
    CHECK(viscosity(1.0, p) == 0.6);
    CHECK(viscosity(0.0, p) == doctest::Approx(0.4));
    CHECK(viscosity(3.0, p) == 0.6);
    CHECK(viscosity(-7.0, p) == 0.2);

    p.kappa0 = 0.05;
    CHECK(conductivity(300.0, p) == 0.05);
    CHECK(conductivity(1.0, p) == 0.05);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    p.mobility.kind = MobilityModel::Kind::Degenerate;
    for (int n = 0; n < 100; ++n) {
        const double c = dist(rng);
        CHECK(mobility(c, p) >= 0.0);
        CHECK(viscosity(c, p) >= 0.0);
        CHECK(conductivity(std::abs(c) + 1e-3, p) > 0.0);
    }
}

TEST_CASE("parameter validation names the offender")
{
    MaterialParams p;
    CHECK_NOTHROW(p.validate());
    p.theta0 = -1.0;
    try {
        p.validate();
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("theta0") != std::string::npos);
    }
}

TEST_CASE("diffusivity")
{
    MaterialParams p;
    CHECK(diffusivity_K(0.0, 1.0, p) == 0.0);
    CHECK(diffusivity_K(0.0, 0.0, p) == -1.0);
    const double c1 = *spinodal_interval(1.0, 0.4).c1;
    CHECK(diffusivity_K(c1 * 0.99, 0.4, p) < 0.0);
    CHECK(diffusivity_K(c1 * 1.01, 0.4, p) > 0.0);
    CHECK(diffusivity_K(-c1 * 1.01, 0.4, p) > 0.0);
}

TEST_CASE("chemical potential")
{
    MaterialParams p;
    const GridSpec g = physical(16, 2.0);
    SUBCASE("zero concentration")
    {
        const ScalarField mu = chemical_potential(ScalarField(g), ScalarField(g, 0.7), VectorField(g), p);
        CHECK(mu.max_abs() == 0.0);
    }
    SUBCASE("uniform state reduces to the scalar formula")
    {
        const double cb = 0.3, tb = 0.8;
        const ScalarField mu = chemical_potential(ScalarField(g, cb), ScalarField(g, tb), VectorField(g), p);
        const double expect = p.theta0 * (cb * cb * cb - cb) + tb * cb;
        CHECK(max_diff(mu, ScalarField(g, expect)) < 1e-12);
    }
    SUBCASE("rigid rotation adds omega^2 = 4 in the interior")
    {
        const VectorField v(ScalarField::from_function(g, [](double, double y) { return -(y - 1.0); }),
                            ScalarField::from_function(g, [](double x, double) { return x - 1.0; }));
        const ScalarField mu = chemical_potential(ScalarField(g, 1.0), ScalarField(g, 0.6), v, p);
        CHECK(interior_max_diff(mu, ScalarField(g, 4.6), 1) < 1e-12);
    }
    SUBCASE("grid mismatch is rejected")
    {
        CHECK_THROWS_AS(chemical_potential(ScalarField(g), ScalarField(periodic(16)), VectorField(g), p),
                        GridMismatch);
    }
}
