#include "phasesep/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace phasesep::thermo {

namespace {

double e0(double theta, const MaterialParams& p) { return p.spec_heat * theta; }
double psi0(double theta, const MaterialParams& p) { return p.spec_heat * theta * (1.0 - std::log(theta)); }

double internal_from_sq(double theta, double c, double grad_sq, const MaterialParams& p)
{
    return e0(theta, p) + p.theta0 * material::F_val(c) + 0.5 * p.gamma * grad_sq;
}

double free_from_sq(double theta, double c, double grad_sq, const MaterialParams& p)
{
    return p.theta0 * material::F_val(c) + theta * material::G_val(c) + 0.5 * p.gamma * grad_sq + psi0(theta, p);
}

double rel_err(double approx, double exact)
{
    return std::abs(approx - exact) / std::max(std::abs(exact), 1.0);
}

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

double min_value(const ScalarField& f) { return f.min(); }

}  // namespace

double internal_energy_density(double theta, double c, std::array<double, 2> grad_c, const MaterialParams& params)
{
    return internal_from_sq(theta, c, grad_c[0] * grad_c[0] + grad_c[1] * grad_c[1], params);
}

double free_energy_density(double theta, double c, std::array<double, 2> grad_c, const MaterialParams& params)
{
    return free_from_sq(theta, c, grad_c[0] * grad_c[0] + grad_c[1] * grad_c[1], params);
}

double entropy_density(double theta, double c, const MaterialParams& params)
{
    return -material::G_val(c) + params.spec_heat * std::log(theta);
}

std::vector<ThermoSample> random_thermo_samples(int n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<ThermoSample> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        ThermoSample s{};
        s.theta = uniform(rng, 0.1, 3.0);
        s.c = uniform(rng, -1.5, 1.5);
        s.grad_c = {uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
        out.push_back(s);
    }
    return out;
}

RestrictionReport thermo_restriction_check(const MaterialParams& params, const std::vector<ThermoSample>& samples)
{
    RestrictionReport rep;
    rep.samples = static_cast<int>(samples.size());
    for (const ThermoSample& s : samples) {
        auto psi = [&](double th, double c, std::array<double, 2> g) { return free_energy_density(th, c, g, params); };

        const double ht = 1e-5 * std::max(1.0, s.theta);
        const double dpsi_dtheta = (psi(s.theta + ht, s.c, s.grad_c) - psi(s.theta - ht, s.c, s.grad_c)) / (2.0 * ht);
        rep.theta_rel_error = std::max(rep.theta_rel_error, rel_err(dpsi_dtheta, -entropy_density(s.theta, s.c, params)));

        const double hc = 1e-5 * std::max(1.0, std::abs(s.c));
        const double dpsi_dc = (psi(s.theta, s.c + hc, s.grad_c) - psi(s.theta, s.c - hc, s.grad_c)) / (2.0 * hc);
        const double dc_exact = params.theta0 * material::F_prime(s.c) + s.theta * material::G_prime(s.c);
        rep.c_rel_error = std::max(rep.c_rel_error, rel_err(dpsi_dc, dc_exact));

        for (int a = 0; a < 2; ++a) {
            const double hg = 1e-5 * std::max(1.0, std::abs(s.grad_c[a]));
            auto gp = s.grad_c;
            auto gm = s.grad_c;
            gp[a] += hg;
            gm[a] -= hg;
            const double dpsi_dg = (psi(s.theta, s.c, gp) - psi(s.theta, s.c, gm)) / (2.0 * hg);
            rep.grad_c_rel_error = std::max(rep.grad_c_rel_error, rel_err(dpsi_dg, params.gamma * s.grad_c[a]));
        }

        const double psi_v = psi(s.theta, s.c, s.grad_c);
        const double via_e = internal_energy_density(s.theta, s.c, s.grad_c, params) -
                             s.theta * entropy_density(s.theta, s.c, params);
        rep.identity_rel_error = std::max(rep.identity_rel_error, std::abs(psi_v - via_e) / std::max(std::abs(psi_v), 1.0));
    }
    return rep;
}

double mass_diff(const ScalarField& c, const MaterialParams& params)
{
    return params.rho0 * grid::integrate(c);
}

double relative_mass_drift(double reference, double current)
{
    return std::abs(current - reference) / std::max(std::abs(reference), 1.0);
}

EnergyReport energy_report(const State& state, const MaterialParams& params)
{
    const ScalarField grad_sq = grid::face_gradient_sq(state.c);
    const GridSpec& g = state.spec();
    ScalarField kin(g), internal(g), free(g), entropy(g);
    for (std::size_t k = 0; k < kin.size(); ++k) {
        const double th = state.theta[k];
        const double c = state.c[k];
        kin[k] = 0.5 * params.rho0 * (state.v.x[k] * state.v.x[k] + state.v.y[k] * state.v.y[k]);
        internal[k] = params.rho0 * internal_from_sq(th, c, grad_sq[k], params);
        free[k] = params.rho0 * free_from_sq(th, c, grad_sq[k], params);
        entropy[k] = params.rho0 * entropy_density(th, c, params);
    }
    EnergyReport rep;
    rep.kinetic = grid::integrate(kin);
    rep.internal = grid::integrate(internal);
    rep.free_energy = grid::integrate(free);
    rep.entropy = grid::integrate(entropy);
    rep.mass_diff = mass_diff(state.c, params);
    return rep;
}

double lyapunov_functional(const ScalarField& c, const ScalarField& u, const MaterialParams& params)
{
    require_same_grid(c.spec(), u.spec(), "lyapunov_functional");
    const ScalarField grad_sq = grid::face_gradient_sq(c);
    ScalarField density(c.spec());
    for (std::size_t k = 0; k < density.size(); ++k)
        density[k] = params.theta0 * material::F_val(c[k]) + u[k] * material::G_val(c[k]) +
                     0.5 * params.gamma * grad_sq[k];
    return grid::integrate(density);
}

namespace {

// int rho0 (v^2/2 + theta0 F(c) + gamma/2 |grad c|^2)
double mechanical_chemical_energy(const State& s, const MaterialParams& p)
{
    const ScalarField grad_sq = grid::face_gradient_sq(s.c);
    ScalarField density(s.spec());
    for (std::size_t k = 0; k < density.size(); ++k)
        density[k] = p.rho0 * (0.5 * (s.v.x[k] * s.v.x[k] + s.v.y[k] * s.v.y[k]) + p.theta0 * material::F_val(s.c[k]) +
                               0.5 * p.gamma * grad_sq[k]);
    return grid::integrate(density);
}

}  // namespace

AuditReport audit_step(const State& before, const State& after, const ChemFields& chem, const SourceTerms& src,
                       const MaterialParams& params, const StepConfig& cfg, double reference_mass,
                       int theta_floor_hits)
{
    require_same_grid(before.spec(), after.spec(), "audit_step");
    const GridSpec& g = before.spec();
    const double dt = cfg.dt;
    const double rho0 = params.rho0;

    AuditReport rep;
    rep.time = after.t;
    rep.theta_floor_hits = theta_floor_hits;
    const EnergyReport e0r = energy_report(before, params);
    rep.energy = energy_report(after, params);
    rep.mass_drift = relative_mass_drift(reference_mass, rep.energy.mass_diff);

    // Dissipation as seen by the heat equation of this step.
    const ScalarField visc = viscous_integrand(after.v, before.c, params);
    const ScalarField chem_diss = chemical_integrand(chem.mu, before.c, params);
    const ScalarField therm = thermal_integrand(before.theta, params);
    const ScalarField cond = heat_conduction(before.theta, params);
    rep.dissipation.viscous = grid::integrate(visc);
    rep.dissipation.chemical = grid::integrate(chem_diss);
    rep.dissipation.thermal = grid::integrate(therm);
    rep.min_viscous_integrand = min_value(visc);
    rep.min_chemical_integrand = min_value(chem_diss);
    rep.min_thermal_integrand = min_value(therm);

    double supply = 0.0;
    double supply_over_theta = 0.0;
    double body_power = 0.0;
    if (src.r) {
        ScalarField rr = *src.r * rho0;
        supply = grid::integrate(rr);
        for (std::size_t k = 0; k < rr.size(); ++k)
            rr[k] /= before.theta[k];
        supply_over_theta = grid::integrate(rr);
    }
    if (src.b) {
        ScalarField bv(g);
        for (std::size_t k = 0; k < bv.size(); ++k)
            bv[k] = rho0 * (src.b->x[k] * before.v.x[k] + src.b->y[k] * before.v.y[k]);
        body_power = grid::integrate(bv);
    }
    rep.dissipation.heat_absorption = grid::integrate(cond) + supply;

    // Clausius-Duhem: entropy rate + entropy flux - entropy supply.
    FaceField q_over_theta = material::conductivity_faces(before.theta, params);
    q_over_theta *= grid::face_gradient(before.theta);
    {
        const FaceField theta_face = grid::face_average(before.theta);
        for (int j = 0; j < g.ny(); ++j)
            for (int f = 0; f <= g.nx(); ++f)
                q_over_theta.x(f, j) = -q_over_theta.x(f, j) / theta_face.x(f, j);
        for (int f = 0; f <= g.ny(); ++f)
            for (int i = 0; i < g.nx(); ++i)
                q_over_theta.y(i, f) = -q_over_theta.y(i, f) / theta_face.y(i, f);
    }
    const double entropy_flux = grid::integrate(grid::face_divergence(q_over_theta));
    rep.cd_residual = (rep.energy.entropy - e0r.entropy) / dt + entropy_flux - supply_over_theta;
    rep.cd_tolerance = kCdToleranceDensity * g.area();

    // Internal power identity, evaluated with the fields of `before`.
    {
        const ScalarField omega = grid::curl2d(before.v);
        const VectorField gc = grid::gradient(before.c);
        const TensorField gv = grid::velocity_gradient(before.v);
        const ScalarField visc_n = viscous_integrand(before.v, before.c, params);
        const ScalarField grad_c_dot_grad_cdot =
            grid::face_product_to_cells(grid::face_gradient(before.c), grid::face_gradient(chem.c_dot));

        ScalarField pm(g), pc(g), diss(g);
        for (std::size_t k = 0; k < pm.size(); ++k) {
            const double c = before.c[k];
            const double gdot = material::G_prime(c) * chem.c_dot[k];
            const double w2 = omega[k] * omega[k];
            const double ericksen_work = gc.x[k] * gc.x[k] * gv.xx[k] + gc.x[k] * gc.y[k] * (gv.xy[k] + gv.yx[k]) +
                                         gc.y[k] * gc.y[k] * gv.yy[k];
            pm[k] = visc_n[k] - params.gamma * rho0 * ericksen_work - rho0 * gdot * w2;
            pc[k] = rho0 * params.theta0 * material::F_prime(c) * chem.c_dot[k] +
                    rho0 * gdot * (before.theta[k] + w2) + rho0 * params.gamma * grad_c_dot_grad_cdot[k] +
                    chem_diss[k];
            diss[k] = visc_n[k] + rho0 * before.theta[k] * gdot + chem_diss[k];
        }
        const double kinetic_rate = (rep.energy.kinetic - e0r.kinetic) / dt;
        const double internal_power = kinetic_rate + grid::integrate(pm) + grid::integrate(pc);
        const double stored_rate =
            (mechanical_chemical_energy(after, params) - mechanical_chemical_energy(before, params)) / dt;
        rep.power_identity_residual = std::abs(internal_power - stored_rate - grid::integrate(diss));
    }

    const double total_before = e0r.kinetic + e0r.internal;
    const double total_after = rep.energy.kinetic + rep.energy.internal;
    rep.energy_budget_residual = std::abs((total_after - total_before) / dt - body_power - supply);
    return rep;
}

AuditReport initial_report(const State& state, const MaterialParams& params)
{
    AuditReport rep;
    rep.time = state.t;
    rep.energy = energy_report(state, params);
    rep.cd_tolerance = kCdToleranceDensity * state.spec().area();
    return rep;
}

}  // namespace phasesep::thermo
