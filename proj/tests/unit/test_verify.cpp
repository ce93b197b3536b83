#include "phasesep/verify.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace phasesep;
using namespace phasesep::verify;
using namespace test_support;

namespace {

// Thin periodic strip holding `m` periods of the fastest mode k^2 = 50.
GridSpec strip(int nx, int m)
{
    const double lx = m * kTwoPi / std::sqrt(50.0);
    return GridSpec(nx, 4, lx, lx * 4.0 / nx, BcMode::Periodic);
}

StepConfig small_dt()
{
    StepConfig cfg;
    cfg.dt = 1e-4;
    return cfg;
}

}  // namespace

TEST_CASE("predicted growth rate")
{
    const MaterialParams p;
    SUBCASE("mixed phase above the threshold is stable")
    {
        for (double u : {1.0, 1.5, 3.0})
            for (double k = 0.1; k < 30.0; k += 0.7)
                CHECK(predicted_growth_rate(k, 0.0, u, p) < 0.0);
    }
    SUBCASE("reference dispersion k^2 (1 - 0.01 k^2)")
    {
        for (double k : {1.0, 3.0, 7.0, 12.0})
            CHECK(predicted_growth_rate(k, 0.0, 0.0, p) == doctest::Approx(k * k * (1.0 - 0.01 * k * k)));
        CHECK(predicted_growth_rate(std::sqrt(50.0), 0.0, 0.0, p) == doctest::Approx(25.0));
        CHECK(predicted_growth_rate(std::sqrt(49.0), 0.0, 0.0, p) < 25.0);
        CHECK(predicted_growth_rate(std::sqrt(51.0), 0.0, 0.0, p) < 25.0);
    }
    SUBCASE("vanishing gradient energy reduces to -K(0) k^2")
    {
        MaterialParams q = p;
        q.gamma = 1e-14;
        const double u = 0.4, k = 3.0;
        CHECK(predicted_growth_rate(k, 0.0, u, q) ==
              doctest::Approx(-material::diffusivity_K(0.0, u, q) * k * k / q.rho0).epsilon(1e-10));
    }
    SUBCASE("long waves do not grow")
    {
        for (double u : {0.0, 0.5, 2.0})
            CHECK(std::abs(predicted_growth_rate(1e-6, 0.0, u, p)) < 1e-11);
    }
    SUBCASE("degenerate mobility in a pure phase is rejected")
    {
        MaterialParams q = p;
        q.mobility.kind = MobilityModel::Kind::Degenerate;
        CHECK_THROWS_AS(predicted_growth_rate(2.0, 1.0, 0.0, q), std::invalid_argument);
        CHECK_THROWS_AS(predicted_growth_rate(2.0, -1.0, 0.0, q), std::invalid_argument);
    }
    SUBCASE("neutral wavenumber")
    {
        CHECK(neutral_wavenumber(0.0, 0.0, p) == doctest::Approx(10.0));
        CHECK(neutral_wavenumber(0.0, 1.2, p) == 0.0);
        CHECK(predicted_growth_rate(neutral_wavenumber(0.0, 0.3, p), 0.0, 0.3, p) == doctest::Approx(0.0));
    }
}

TEST_CASE("measured growth rates")
{
    const MaterialParams p;
    const GridSpec g = strip(128, 4);
    const double k1 = kTwoPi / g.lx();
    SUBCASE("unstable mode")
    {
        const DispersionPoint d = measure_growth_rate(g, 2 * k1, 0.0, 0.0, p, small_dt());
        CHECK(d.sigma_measured > 0.0);
        CHECK(d.rel_error < 0.05);
        CHECK(d.fit_samples >= 3);
    }
    SUBCASE("stable mixed phase decays at the predicted rate")
    {
        GrowthOptions o;
        o.t_max = 5.0;
        const DispersionPoint d = measure_growth_rate(g, 3 * k1, 0.0, 1.5, p, small_dt(), o);
        CHECK(d.sigma_measured < 0.0);
        CHECK(d.rel_error < 0.05);
    }
    SUBCASE("mode above the neutral wavenumber decays")
    {
        const double k = 6 * k1;
        REQUIRE(k > neutral_wavenumber(0.0, 0.0, p));
        const DispersionPoint d = measure_growth_rate(g, k, 0.0, 0.0, p, small_dt());
        CHECK(d.sigma_predicted < 0.0);
        CHECK(d.sigma_measured < 0.0);
    }
    SUBCASE("argument checks")
    {
        CHECK_THROWS_AS(measure_growth_rate(g, 1.3 * k1, 0.0, 0.0, p, small_dt()), std::invalid_argument);
        CHECK_THROWS_AS(measure_growth_rate(physical(16), 1.0, 0.0, 0.0, p, small_dt()), std::invalid_argument);
        GrowthOptions o;
        o.epsilon = 1e-3;
        CHECK_THROWS_AS(measure_growth_rate(g, k1, 0.0, 0.0, p, small_dt(), o), std::invalid_argument);
    }
    SUBCASE("empty fit window is reported")
    {
        GrowthOptions o;
        o.t_max = 2e-4;
        CHECK_THROWS_AS(measure_growth_rate(g, 2 * k1, 0.0, 0.0, p, small_dt(), o), MeasurementError);
    }
}

TEST_CASE("spinodal sweep")
{
    const MaterialParams p;
    const GridSpec g = periodic(32, 8.0);
    StepConfig cfg;
    cfg.dt = 0.01;
    cfg.stabilization_s = 1.0;
    SweepOptions o;
    o.run_time = 50.0;

    const std::vector<double> us{0.0, 0.5, 0.8, 1.2, 1.6, 2.0};
    const auto runs = spinodal_sweep(g, us, p, cfg, o);
    REQUIRE(runs.size() == us.size());
    CHECK(runs.front().grew);
    CHECK_FALSE(runs.back().grew);
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        CHECK(runs[i].amplitude_ratio > 0.0);
        CHECK((runs[i].grew || !runs[i + 1].grew));
    }

    CHECK_THROWS_AS(locate_threshold(g, 1.2, 2.0, 0.1, p, cfg, o), MeasurementError);
    CHECK_THROWS_AS(locate_threshold(g, 1.0, 0.5, 0.1, p, cfg, o), std::invalid_argument);

    // A quiescent frozen-flow run is the plain sweep run.
    const ThresholdResult plain = threshold_run(g, 0.5, p, cfg, o);
    const ThresholdResult still = frozen_flow_run(noisy_field(g, o.c_bar, o.noise_amplitude, o.seed),
                                                  ScalarField(g, 0.5), VectorField(g), p, cfg, o.run_time);
    CHECK(plain.amplitude_ratio == still.amplitude_ratio);
}

TEST_CASE("noise and stirring helpers")
{
    const GridSpec g = periodic(16);
    const ScalarField a = noisy_field(g, 0.2, 0.01, 5);
    CHECK(a.values() == noisy_field(g, 0.2, 0.01, 5).values());
    CHECK(a.values() != noisy_field(g, 0.2, 0.01, 6).values());
    CHECK(a.min() >= 0.19);
    CHECK(a.max() < 0.21);
    CHECK(perturbation_norm(ScalarField(g, 3.0)) == 0.0);

    const GridSpec b = physical(16, 4.0);
    CHECK(interior_max_diff(grid::curl2d(rigid_rotation(b, 0.4)), ScalarField(b, 0.8), 1) < 1e-12);
    CHECK_THROWS_AS(curl_suppression_experiment(periodic(16), MaterialParams{}, StepConfig{}, StirOptions{}),
                    std::invalid_argument);
}

TEST_CASE("gradient transport identity")
{
    const GridSpec g = periodic(64);
    CHECK(lemma1_check(Lemma1Field::Static, Lemma1Velocity::Zero, 0.3, g) < 1e-12);
    CHECK(lemma1_check(Lemma1Field::LinearXT, Lemma1Velocity::Uniform, 0.3, g) < 1e-10);
    const OrderRow row = lemma1_convergence();
    REQUIRE(row.errors.size() == 3);
    CHECK(row.min_ratio >= 3.5);
}

TEST_CASE("operator orders and check suite")
{
    const OperatorOrderReport ops = operator_order_suite();
    CHECK(ops.rows.size() >= 5);
    for (const OrderRow& r : ops.rows) {
        INFO(r.name);
        CHECK(r.min_ratio >= 3.5);
    }
    CHECK(ops.adjoint_error < 1e-10);
    CHECK(ops.conservation_error < 1e-12);

    const CheckReport rep = run_check_suite();
    for (const CheckLine& l : rep.lines) {
        INFO(l.name);
        CHECK(l.pass);
    }
    CHECK(rep.all_pass());
}
