#include "phasesep/dissipation.hpp"
#include "phasesep/dynamics.hpp"
#include "phasesep/thermo.hpp"
#include "phasesep/verify.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace phasesep;
using namespace test_support;

namespace {

MaterialParams coupled_params()
{
    MaterialParams p;
    p.gamma = 0.04;
    p.nu_a = p.nu_b = 0.5;
    p.kappa0 = 0.01;
    p.spec_heat = 5.0;
    return p;
}

VectorField cellular(const GridSpec& g, double amp)
{
    return VectorField(
        ScalarField::from_function(g, [amp](double x, double y) { return amp * std::sin(x) * std::cos(y); }),
        ScalarField::from_function(g, [amp](double x, double y) { return -amp * std::cos(x) * std::sin(y); }));
}

State smooth_state(const GridSpec& g)
{
    State s = State::uniform(g, 0.0, 0.5);
    s.c = ScalarField::from_function(g, [](double x, double y) {
        return 0.3 * std::sin(x) * std::cos(2 * y) + 0.2 * std::cos(3 * x);
    });
    s.v = cellular(g, 0.05);
    return s;
}

double l2_diff(const ScalarField& a, const ScalarField& b)
{
    return std::sqrt(grid::integrate(hadamard(a - b, a - b)));
}

}  // namespace

TEST_CASE("chemical fields")
{
    const MaterialParams p;
    SUBCASE("uniform state has no flux")
    {
        for (const GridSpec& g : {periodic(16), physical(16)}) {
            const ChemFields ch = dynamics::ch_rhs(State::uniform(g, 0.4, 0.7), p);
            CHECK(ch.c_dot.max_abs() == 0.0);
        }
    }
    SUBCASE("degenerate mobility in a pure phase transports nothing")
    {
        MaterialParams q = p;
        q.mobility.kind = MobilityModel::Kind::Degenerate;
        const GridSpec g = periodic(16);
        State s = State::uniform(g, 1.0, 0.7);
        s.theta = ScalarField::from_function(g, [](double x, double) { return 1.0 + 0.5 * std::sin(x); });
        CHECK(dynamics::ch_rhs(s, q).c_dot.max_abs() == 0.0);
    }
    SUBCASE("single mode follows the linearisation")
    {
        // c_dot = -(M / rho0) k^2 (gamma k^2 + W''(0)) eps sin(kx) up to O(eps^2 + dx^2).
        const double eps = 1e-6, k = 2.0, u = 0.3;
        const double expect = -k * k * (p.gamma * k * k + material::W_second(0.0, u, p.theta0));
        double prev = 0.0;
        for (int n : {32, 64, 128}) {
            const GridSpec g = periodic(n);
            const ScalarField c = ScalarField::from_function(g, [&](double x, double) { return eps * std::sin(k * x); });
            const ChemFields ch = dynamics::ch_rhs_frozen(c, ScalarField(g, u), p);
            const double err = max_diff(ch.c_dot, expect * c) / (eps * std::abs(expect));
            CHECK(err < 0.05);
            if (prev > 0.0)
                CHECK(prev / err >= 3.5);
            prev = err;
        }
    }
}

TEST_CASE("Cahn-Hilliard step")
{
    const MaterialParams p;
    StepConfig cfg;
    cfg.dt = 0.01;
    cfg.stabilization_s = 1.0;

    SUBCASE("minimum state is a fixed point")
    {
        const double cmin = std::sqrt((p.theta0 - 0.5) / p.theta0);
        for (const GridSpec& g : {periodic(16), physical(16)}) {
            const State s = State::uniform(g, cmin, 0.5);
            CHECK(max_diff(dynamics::ch_step(s, p, cfg), s.c) < 1e-14);
        }
    }
    SUBCASE("mass is conserved over 1000 steps")
    {
        for (const GridSpec& g : {periodic(32), physical(32)}) {
            State s = State::uniform(g, 0.0, 0.5);
            s.c = ScalarField::from_function(g, [](double x, double y) {
                return 0.1 + 0.2 * std::cos(x) * std::cos(y) + 0.1 * std::sin(2 * x + 0.3);
            });
            const dynamics::Integrator integ(g, p, cfg);
            const double m0 = thermo::mass_diff(s.c, p);
            for (int n = 0; n < 1000; ++n)
                s.c = integ.ch_step(s, dynamics::ch_rhs(s, p));
            CHECK(thermo::relative_mass_drift(m0, thermo::mass_diff(s.c, p)) < 1e-10);
        }
    }
    SUBCASE("first order in time")
    {
        const GridSpec g = periodic(32);
        State s0 = State::uniform(g, 0.0, 0.5);
        s0.c = ScalarField::from_function(g, [](double x, double y) { return 0.3 * std::sin(x) * std::cos(y); });
        auto advance = [&](double dt) {
            StepConfig c = cfg;
            c.dt = dt;
            const dynamics::Integrator integ(g, p, c);
            State s = s0;
            for (long n = 0; n < std::lround(0.2 / dt); ++n)
                s.c = integ.ch_step(s, dynamics::ch_rhs(s, p));
            return s.c;
        };
        const ScalarField ref = advance(0.2 / 1024);
        const double e1 = l2_diff(advance(0.02), ref);
        const double e2 = l2_diff(advance(0.01), ref);
        CHECK(e1 / e2 > 1.7);
        CHECK(e1 / e2 < 2.3);
    }
}

TEST_CASE("Ericksen force")
{
    MaterialParams p;
    p.gamma = 0.05;
    p.rho0 = 2.0;
    SUBCASE("uniform concentration")
    {
        const GridSpec g = physical(16);
        const VectorField f = dynamics::ericksen_force(ScalarField(g, 0.3), p);
        CHECK(f.x.max_abs() == 0.0);
        CHECK(f.y.max_abs() == 0.0);
    }
    SUBCASE("sin kx gives gamma rho0 k^3 sin 2kx")
    {
        const double k = 2.0, amp = p.gamma * p.rho0 * k * k * k;
        double prev = 0.0;
        for (int n : {32, 64, 128}) {
            const GridSpec g = periodic(n);
            const VectorField f =
                dynamics::ericksen_force(ScalarField::from_function(g, [k](double x, double) { return std::sin(k * x); }), p);
            const ScalarField exact =
                ScalarField::from_function(g, [&](double x, double) { return amp * std::sin(2 * k * x); });
            const double err = max_diff(f.x, exact);
            CHECK(f.y.max_abs() < 1e-12);
            if (prev > 0.0)
                CHECK(prev / err >= 3.5);
            prev = err;
        }
        CHECK(prev < 0.01 * amp);
    }
    SUBCASE("planar interface pushes only along its normal")
    {
        const GridSpec g = physical(32, 4.0);
        const VectorField f = dynamics::ericksen_force(
            ScalarField::from_function(g, [](double x, double) { return std::tanh((x - 2.0) / 0.3); }), p);
        CHECK(f.y.max_abs() == 0.0);
        CHECK(f.x.max_abs() > 0.0);
    }
}

TEST_CASE("skew force")
{
    const MaterialParams p;
    SUBCASE("vanishes when G does not change")
    {
        // With constant mobility a pure phase under a nonuniform w^2 still
        // diffuses (mu = theta + w^2), so take c_dot = 0 directly and also the
        // degenerate mobility, which freezes c = +-1 through ch_rhs.
        const GridSpec g = periodic(16);
        State s = State::uniform(g, 1.0, 0.5);
        s.v = cellular(g, 0.3);
        VectorField f = dynamics::skew_force(ScalarField(g), s.c, s.v, p);
        CHECK(f.x.max_abs() == 0.0);
        CHECK(f.y.max_abs() == 0.0);
        MaterialParams q = p;
        q.mobility.kind = MobilityModel::Kind::Degenerate;
        for (double c : {1.0, -1.0}) {
            s.c = ScalarField(g, c);
            f = dynamics::skew_force(dynamics::ch_rhs(s, q).c_dot, s.c, s.v, q);
            CHECK(f.x.max_abs() == 0.0);
            CHECK(f.y.max_abs() == 0.0);
        }
    }
    SUBCASE("vanishes at rest")
    {
        const GridSpec g = periodic(16);
        const VectorField f = dynamics::skew_force(random_field(g, 1), random_field(g, 2), VectorField(g), p);
        CHECK(f.x.max_abs() == 0.0);
        CHECK(f.y.max_abs() == 0.0);
    }
    SUBCASE("manufactured product matches the analytic curl")
    {
        // c = sin x, c_dot = cos y, omega = 2 sin x sin y for the cellular flow:
        // q = G'(c) c_dot omega = sin^2 x sin 2y.
        double prev = 0.0;
        for (int n : {32, 64, 128}) {
            const GridSpec g = periodic(n);
            const ScalarField c = ScalarField::from_function(g, [](double x, double) { return std::sin(x); });
            const ScalarField cd = ScalarField::from_function(g, [](double, double y) { return std::cos(y); });
            const VectorField f = dynamics::skew_force(cd, c, cellular(g, 1.0), p);
            const ScalarField fx = ScalarField::from_function(
                g, [](double x, double y) { return 2.0 * std::sin(x) * std::sin(x) * std::cos(2 * y); });
            const ScalarField fy = ScalarField::from_function(
                g, [](double x, double y) { return -std::sin(2 * x) * std::sin(2 * y); });
            const double err = std::max(max_diff(f.x, fx), max_diff(f.y, fy));
            if (prev > 0.0)
                CHECK(prev / err >= 3.5);
            prev = err;
        }
        CHECK(prev < 1e-2);
    }
}

TEST_CASE("viscous force of a Taylor-Green cell")
{
    MaterialParams p;
    p.nu_a = p.nu_b = 0.3;
    const GridSpec g = periodic(128);
    const VectorField v = cellular(g, 1.0);
    const VectorField f = dynamics::viscous_force(v, ScalarField(g), p);
    // div(2 nu D) = nu lap v = -2 nu v.
    CHECK(max_diff(f.x, v.x * (-0.6)) < 1e-3);
    CHECK(max_diff(f.y, v.y * (-0.6)) < 1e-3);
}

TEST_CASE("momentum step")
{
    const MaterialParams p = coupled_params();
    StepConfig cfg;
    cfg.dt = 1e-3;

    SUBCASE("rest stays at rest with zero pressure")
    {
        for (const GridSpec& g : {periodic(16), physical(16)}) {
            const State s = State::uniform(g, 0.2, 0.5);
            const dynamics::FlowUpdate f = dynamics::ns_step(s, dynamics::ch_rhs(s, p), {}, p, cfg);
            CHECK(f.v.x.max_abs() == 0.0);
            CHECK(f.v.y.max_abs() == 0.0);
            CHECK(f.p.max_abs() < 1e-14);
        }
    }
    SUBCASE("projection meets its tolerance every step")
    {
        for (const GridSpec& g : {periodic(32), physical(32)}) {
            State s = smooth_state(g);
            s.v = dynamics::Integrator(g, p, cfg).project(s.v).v;
            const dynamics::Integrator integ(g, p, cfg);
            for (int n = 0; n < 50; ++n) {
                s = integ.coupled_step(s, {}).state;
                CHECK(grid::divergence(s.v).max_abs() < cfg.projection_tol);
            }
        }
    }
    SUBCASE("Taylor-Green vortex decays at 2 nu |k|^2")
    {
        // Uniform c: no capillary or skew forcing. Kinetic energy decays as
        // exp(-2 nu |k|^2 t) with |k|^2 = 2.
        const GridSpec g = periodic(64);
        State s = State::uniform(g, 0.0, 1.0);
        s.v = cellular(g, 1e-3);
        const dynamics::Integrator integ(g, p, cfg);
        double k_prev = thermo::energy_report(s, p).kinetic;
        const double k0 = k_prev;
        bool monotone = true;
        const int steps = 500;
        for (int n = 0; n < steps; ++n) {
            s = integ.coupled_step(s, {}).state;
            const double k = thermo::energy_report(s, p).kinetic;
            monotone = monotone && k < k_prev;
            k_prev = k;
        }
        CHECK(monotone);
        const double rate = -std::log(k_prev / k0) / (steps * cfg.dt);
        const double exact = 2.0 * p.nu_a * 2.0;
        CHECK(std::abs(rate - exact) < 0.1 * exact);
    }
}

TEST_CASE("heat step")
{
    MaterialParams p = coupled_params();
    StepConfig cfg;
    cfg.dt = 1e-3;

    SUBCASE("equilibrium leaves theta unchanged")
    {
        const GridSpec g = physical(16);
        const State s = State::uniform(g, 0.7, 0.4);
        const dynamics::HeatUpdate h = dynamics::heat_step(s, dynamics::ch_rhs(s, p), {}, p, cfg);
        CHECK(max_diff(h.theta, s.theta) == 0.0);
        CHECK(h.floor_hits == 0);
    }
    SUBCASE("update equals the independently assembled source terms")
    {
        p.kappa0 = 1e-12;
        const GridSpec g = periodic(32);
        State s = State::uniform(g, 0.0, 0.5);
        s.c = ScalarField::from_function(g, [](double x, double y) { return 0.3 * std::sin(x) * std::cos(y); });
        const ChemFields ch = dynamics::ch_rhs(s, p);
        const dynamics::HeatUpdate h = dynamics::heat_step(s, ch, {}, p, cfg);
        const ScalarField chem = thermo::chemical_integrand(ch.mu, s.c, p);
        const VectorField gmu = grid::gradient(ch.mu);
        bool heated = true;
        for (std::size_t k = 0; k < s.c.size(); ++k) {
            const double gdot = p.rho0 * s.theta[k] * s.c[k] * ch.c_dot[k];
            const double expect = s.theta[k] + cfg.dt * (chem[k] + gdot) / (p.rho0 * p.spec_heat);
            CHECK(h.theta[k] == doctest::Approx(expect).epsilon(1e-12));
            if (chem[k] + gdot > 0.0)
                heated = heated && h.theta[k] > s.theta[k];
        }
        CHECK(heated);
        CHECK(chem.min() >= 0.0);
        CHECK(chem.max() > 0.0);
    }
    SUBCASE("floor is applied and counted")
    {
        const GridSpec g = periodic(16);
        State s = State::uniform(g, 0.0, 1e-9);
        SourceTerms src;
        src.r = ScalarField(g, -1.0);
        const dynamics::HeatUpdate h = dynamics::heat_step(s, dynamics::ch_rhs(s, p), src, p, cfg);
        CHECK(h.floor_hits == static_cast<int>(g.size()));
        CHECK(h.theta.min() == kThetaFloor);
    }
}

TEST_CASE("coupled step")
{
    const MaterialParams p = coupled_params();
    StepConfig cfg;
    cfg.dt = 3e-3;
    cfg.stabilization_s = 1.0;

    SUBCASE("equilibrium is an exact fixed point")
    {
        const double cmin = std::sqrt((p.theta0 - 0.5) / p.theta0);
        for (const GridSpec& g : {periodic(16), physical(16)}) {
            const State s = State::uniform(g, -cmin, 0.5);
            const State n = dynamics::coupled_step(s, {}, p, cfg);
            CHECK(max_diff(n.c, s.c) < 1e-14);
            CHECK(max_diff(n.theta, s.theta) < 1e-14);
            CHECK(n.v.x.max_abs() == 0.0);
            CHECK(n.t == doctest::Approx(cfg.dt));
        }
    }
    SUBCASE("spinodal run stays finite and conserves mass")
    {
        for (const GridSpec& g : {periodic(32), physical(32)}) {
            State s = State::uniform(g, 0.0, 0.5);
            s.c = verify::noisy_field(g, 0.0, 0.05, 4);
            const dynamics::Integrator integ(g, p, cfg);
            const double m0 = thermo::mass_diff(s.c, p);
            for (int n = 0; n < 1000; ++n)
                s = integ.coupled_step(s, {}).state;
            CHECK_NOTHROW(s.validate());
            CHECK(thermo::relative_mass_drift(m0, thermo::mass_diff(s.c, p)) < 1e-10);
        }
    }
    SUBCASE("self-convergence in dt is at least first order")
    {
        const GridSpec g = periodic(32);
        const State s0 = smooth_state(g);
        auto advance = [&](double dt) {
            StepConfig c = cfg;
            c.dt = dt;
            const dynamics::Integrator integ(g, p, c);
            State s = s0;
            s.v = integ.project(s.v).v;
            for (long n = 0; n < std::lround(0.1 / dt); ++n)
                s = integ.coupled_step(s, {}).state;
            return s;
        };
        const State a = advance(2e-3), b = advance(1e-3), c = advance(5e-4);
        auto order = [](double e1, double e2) { return std::log2(e1 / e2); };
        CHECK(order(l2_diff(a.c, b.c), l2_diff(b.c, c.c)) >= 0.95);
        CHECK(order(l2_diff(a.v.x, b.v.x), l2_diff(b.v.x, c.v.x)) >= 0.95);
        CHECK(order(l2_diff(a.v.y, b.v.y), l2_diff(b.v.y, c.v.y)) >= 0.95);
        CHECK(order(l2_diff(a.p, b.p), l2_diff(b.p, c.p)) >= 0.95);
        CHECK(order(l2_diff(a.theta, b.theta), l2_diff(b.theta, c.theta)) >= 0.95);
    }
    SUBCASE("runaway step size is reported as a solver error")
    {
        const GridSpec g = periodic(16);
        State s = smooth_state(g);
        StepConfig bad = cfg;
        bad.dt = 5.0;
        const dynamics::Integrator integ(g, p, bad);
        CHECK_THROWS_AS(
            [&] {
                for (int n = 0; n < 200; ++n)
                    s = integ.coupled_step(s, {}).state;
            }(),
            SolverError);
    }
}

TEST_CASE("stable step estimate")
{
    MaterialParams p = coupled_params();
    const GridSpec g = periodic(32);
    const State s = smooth_state(g);
    const double dt1 = dynamics::stable_dt_estimate(s, dynamics::ch_rhs(s, p), p);
    CHECK(std::isfinite(dt1));
    CHECK(dt1 > 0.0);
    p.nu_a = p.nu_b = 5.0;
    CHECK(dynamics::stable_dt_estimate(s, dynamics::ch_rhs(s, p), p) < dt1);
}

TEST_CASE("step configuration is validated")
{
    StepConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(dynamics::Integrator(periodic(8), MaterialParams{}, cfg), std::invalid_argument);
}
