#include "phasesep/dynamics.hpp"

#include "phasesep/dissipation.hpp"
#include "phasesep/linear_solvers.hpp"
#include "phasesep/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace phasesep {

namespace {

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

}  // namespace

State State::uniform(const GridSpec& spec, double c, double theta)
{
    return State{ScalarField(spec, c), VectorField(spec), ScalarField(spec), ScalarField(spec, theta), 0.0};
}

void State::validate() const
{
    const GridSpec& g = c.spec();
    require_same_grid(g, v.spec(), "State");
    require_same_grid(g, p.spec(), "State");
    require_same_grid(g, theta.spec(), "State");
    if (!c.all_finite() || !v.all_finite() || !p.all_finite() || !theta.all_finite())
        throw std::invalid_argument("State contains non-finite values");
    if (!(theta.min() > 0.0))
        throw std::invalid_argument("State temperature must be positive everywhere");
}

void StepConfig::validate() const
{
    if (!(dt > 0.0))
        throw std::invalid_argument("dt must be positive");
    if (!(stabilization_s >= 0.0))
        throw std::invalid_argument("stabilization_s must be non-negative");
    if (!(projection_tol > 0.0))
        throw std::invalid_argument("projection_tol must be positive");
    if (max_linear_iters < 1)
        throw std::invalid_argument("max_linear_iters must be at least 1");
}

SolverError::SolverError(std::string stage, int iterations, const std::string& what)
    : std::runtime_error(stage + ": " + what + " (" + std::to_string(iterations) + " iterations)"),
      stage_(std::move(stage)),
      iterations_(iterations)
{
}

namespace dynamics {

ChemFields ch_rhs_frozen(const ScalarField& c, const ScalarField& u, const MaterialParams& params)
{
    ScalarField mu = material::chemical_potential_u(c, u, params);
    FaceField flux = material::mobility_faces(c, params);
    flux *= grid::face_gradient(mu);
    ScalarField c_dot = grid::face_divergence(flux);
    c_dot *= 1.0 / params.rho0;
    return ChemFields{std::move(mu), std::move(flux), std::move(c_dot)};
}

ChemFields ch_rhs(const State& state, const MaterialParams& params)
{
    return ch_rhs_frozen(state.c, material::effective_u_field(state.theta, state.v), params);
}

VectorField ericksen_force(const ScalarField& c, const MaterialParams& params)
{
    const VectorField g = grid::gradient(c);
    const GridSpec& spec = c.spec();
    ScalarField txx(spec), txy(spec), tyy(spec);
    for (std::size_t k = 0; k < txx.size(); ++k) {
        txx[k] = g.x[k] * g.x[k];
        txy[k] = g.x[k] * g.y[k];
        tyy[k] = g.y[k] * g.y[k];
    }
    const double scale = -params.gamma * params.rho0;
    ScalarField fx = grid::derivative_x(txx, Parity::Even) + grid::derivative_y(txy, Parity::Odd);
    ScalarField fy = grid::derivative_x(txy, Parity::Odd) + grid::derivative_y(tyy, Parity::Even);
    return VectorField(fx * scale, fy * scale);
}

VectorField skew_force(const ScalarField& c_dot, const ScalarField& c, const VectorField& v,
                       const MaterialParams& params)
{
    require_same_grid(c_dot.spec(), c.spec(), "skew_force");
    const ScalarField omega = grid::curl2d(v);
    ScalarField q(c.spec());
    for (std::size_t k = 0; k < q.size(); ++k)
        q[k] = material::G_prime(c[k]) * c_dot[k] * omega[k];
    ScalarField fx = grid::derivative_y(q) * params.rho0;
    ScalarField fy = grid::derivative_x(q) * (-params.rho0);
    return VectorField(std::move(fx), std::move(fy));
}

VectorField viscous_force(const VectorField& v, const ScalarField& c, const MaterialParams& params)
{
    require_same_grid(v.spec(), c.spec(), "viscous_force");
    const ScalarField nu = material::viscosity_field(c, params);
    const FaceField nu_face = grid::face_average(nu, Parity::Even);

    FaceField sx = grid::face_gradient(v.x, Parity::Odd);
    sx *= nu_face;
    FaceField sy = grid::face_gradient(v.y, Parity::Odd);
    sy *= nu_face;
    ScalarField fx = grid::face_divergence(sx);
    ScalarField fy = grid::face_divergence(sy);

    // d_b(nu d_a v_b) = (grad v)^T grad nu once div v = 0.
    const TensorField gv = grid::velocity_gradient(v);
    const VectorField gnu = grid::gradient(nu);
    for (std::size_t k = 0; k < fx.size(); ++k) {
        fx[k] += gv.xx[k] * gnu.x[k] + gv.yx[k] * gnu.y[k];
        fy[k] += gv.xy[k] * gnu.x[k] + gv.yy[k] * gnu.y[k];
    }
    return VectorField(std::move(fx), std::move(fy));
}

double stable_dt_estimate(const State& state, const ChemFields& chem, const MaterialParams& params)
{
    const GridSpec& g = state.spec();
    const double h2 = std::min(g.dx(), g.dy()) * std::min(g.dx(), g.dy());
    double nu_max = std::max(params.nu_a, params.nu_b) / params.rho0;
    double gdot_max = 0.0;
    double vmax2 = 0.0;
    double kappa_max = 0.0;
    double feedback = 0.0;
    const ScalarField omega = grid::curl2d(state.v);
    for (std::size_t k = 0; k < state.c.size(); ++k) {
        const double gp = material::G_prime(state.c[k]);
        gdot_max = std::max(gdot_max, std::abs(gp * chem.c_dot[k]));
        feedback = std::max(feedback, material::mobility(state.c[k], params) * gp * gp * omega[k] * omega[k]);
        vmax2 = std::max(vmax2, state.v.x[k] * state.v.x[k] + state.v.y[k] * state.v.y[k]);
        kappa_max = std::max(kappa_max, material::conductivity(state.theta[k], params));
    }
    const double momentum_diff = nu_max + gdot_max;
    const double thermal_diff = kappa_max / (params.rho0 * params.spec_heat);
    double bound = std::numeric_limits<double>::infinity();
    if (momentum_diff > 0.0)
        bound = std::min(bound, h2 / (4.0 * momentum_diff));
    if (thermal_diff > 0.0)
        bound = std::min(bound, h2 / (4.0 * thermal_diff));
    if (vmax2 > 0.0)
        bound = std::min(bound, 2.0 * nu_max / vmax2);
    // Explicit loop c_dot -> skew force -> w^2 in mu -> c_dot acts like a
    // fourth-order operator with gain ~ 2 M G'^2 w^2 dt (2/h)^4.
    if (feedback > 0.0)
        bound = std::min(bound, h2 * h2 / (32.0 * feedback));
    return bound;
}

Integrator::Integrator(const GridSpec& spec, const MaterialParams& params, const StepConfig& cfg)
    : spec_(spec), params_(params), cfg_(cfg)
{
    cfg_.validate();
    if (spec.bc() == BcMode::Periodic)
        spectral_ = std::make_unique<PeriodicSpectral>(spec);
    else
        cosine_ = std::make_unique<CosineSpectral>(spec);
}

Integrator::~Integrator() = default;
Integrator::Integrator(Integrator&&) noexcept = default;
Integrator& Integrator::operator=(Integrator&&) noexcept = default;

ScalarField Integrator::implicit_ch_update(const ScalarField& c, const ScalarField& rate, double mbar) const
{
    const double dt = cfg_.dt;
    const double a = mbar * params_.gamma / params_.rho0;
    const double b = cfg_.stabilization_s / params_.rho0;
    ScalarField rhs = rate * dt;

    ScalarField delta(spec_);
    if (spectral_) {
        delta = spectral_->apply_symbol(rhs, [&](double lam) { return 1.0 / (1.0 + dt * (a * lam * lam - b * lam)); });
    } else {
        const LinearOperator op = [&](const std::vector<double>& in, std::vector<double>& out) {
            const ScalarField x(spec_, in);
            const ScalarField lap = grid::laplacian(x);
            const ScalarField bih = grid::laplacian(lap);
            out.resize(in.size());
            for (std::size_t k = 0; k < in.size(); ++k)
                out[k] = in[k] + dt * (a * bih[k] - b * lap[k]);
        };
        CgOptions opts;
        opts.rel_tol = 1e-10;
        opts.max_iters = cfg_.max_linear_iters;
        opts.preconditioner = [&](const std::vector<double>& r, std::vector<double>& z) {
            z = cosine_
                    ->apply(ScalarField(spec_, r),
                            [&](int mx, int my) {
                                const double lam = cosine_->laplacian_symbol(mx, my);
                                return 1.0 / (1.0 + dt * (a * lam * lam - b * lam));
                            })
                    .values();
        };
        std::vector<double> x0;
        opts.preconditioner(rhs.values(), x0);
        CgResult res = conjugate_gradient(op, rhs.values(), std::move(x0), opts);
        if (!res.converged)
            throw SolverError("ch_step", res.iterations, "implicit Cahn-Hilliard solve did not converge");
        delta = ScalarField(spec_, std::move(res.x));
    }
    return c + delta;
}

ScalarField Integrator::ch_step(const State& state, const ChemFields& chem) const
{
    require_same_grid(state.spec(), spec_, "ch_step");
    ScalarField rate = chem.c_dot - grid::conservative_advection(state.c, state.v);
    double mbar = 0.0;
    for (std::size_t k = 0; k < state.c.size(); ++k)
        mbar = std::max(mbar, material::mobility(state.c[k], params_));
    return implicit_ch_update(state.c, rate, mbar);
}

ScalarField Integrator::ch_step_frozen(const ScalarField& c, const ScalarField& u) const
{
    require_same_grid(c.spec(), spec_, "ch_step_frozen");
    const ChemFields chem = ch_rhs_frozen(c, u, params_);
    double mbar = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k)
        mbar = std::max(mbar, material::mobility(c[k], params_));
    return implicit_ch_update(c, chem.c_dot, mbar);
}

FlowUpdate Integrator::project(const VectorField& v_star) const
{
    const double tol = cfg_.projection_tol;
    if (spectral_) {
        PeriodicSpectral::Projection pr = spectral_->project(v_star);
        const double div_max = grid::divergence(pr.v).max_abs();
        if (!(div_max < tol))
            throw SolverError("projection", 0,
                              "max|div v| = " + sci(div_max) + " above projection_tol");
        return FlowUpdate{std::move(pr.v), std::move(pr.phi)};
    }

    const LinearOperator op = [&](const std::vector<double>& in, std::vector<double>& out) {
        const ScalarField phi(spec_, in);
        const ScalarField lap = grid::divergence(grid::gradient(phi));
        out.resize(in.size());
        for (std::size_t k = 0; k < in.size(); ++k)
            out[k] = -lap[k];
    };
    ScalarField rhs = grid::divergence(v_star) * -1.0;
    CgOptions opts;
    opts.rel_tol = 0.0;
    opts.max_abs_tol = 0.25 * tol;
    opts.max_iters = cfg_.max_linear_iters;
    opts.zero_mean = true;
    opts.preconditioner = [&](const std::vector<double>& r, std::vector<double>& z) {
        z = cosine_
                ->apply(ScalarField(spec_, r),
                        [&](int mx, int my) { return mx == 0 && my == 0 ? 0.0 : -1.0 / cosine_->central_symbol(mx, my); })
                .values();
    };
    CgResult res = conjugate_gradient(op, rhs.values(), {}, opts);
    ScalarField phi(spec_, std::move(res.x));
    const VectorField gphi = grid::gradient(phi);
    VectorField v(v_star.x - gphi.x, v_star.y - gphi.y);
    const double div_max = grid::divergence(v).max_abs();
    if (!(div_max < tol))
        throw SolverError("projection", res.iterations,
                          "max|div v| = " + sci(div_max) + " above projection_tol");
    return FlowUpdate{std::move(v), std::move(phi)};
}

FlowUpdate Integrator::ns_step(const State& state, const ChemFields& chem, const SourceTerms& src) const
{
    require_same_grid(state.spec(), spec_, "ns_step");
    const double dt = cfg_.dt;
    const double inv_rho = 1.0 / params_.rho0;
    const VectorField& v = state.v;

    const VectorField visc = viscous_force(v, state.c, params_);
    const VectorField eric = ericksen_force(state.c, params_);
    const VectorField skew = skew_force(chem.c_dot, state.c, v, params_);
    const ScalarField adv_x = grid::advect(v.x, v, Parity::Odd);
    const ScalarField adv_y = grid::advect(v.y, v, Parity::Odd);

    VectorField v_star = v;
    for (std::size_t k = 0; k < v.x.size(); ++k) {
        double ax = -adv_x[k] + inv_rho * (visc.x[k] + eric.x[k] + skew.x[k]);
        double ay = -adv_y[k] + inv_rho * (visc.y[k] + eric.y[k] + skew.y[k]);
        if (src.b) {
            ax += src.b->x[k];
            ay += src.b->y[k];
        }
        v_star.x[k] += dt * ax;
        v_star.y[k] += dt * ay;
    }

    FlowUpdate out = project(v_star);
    // phi is the projection potential; p = rho0 phi / dt, zero mean.
    out.p *= params_.rho0 / dt;
    double mean = 0.0;
    for (double x : out.p.values())
        mean += x;
    mean /= static_cast<double>(out.p.size());
    for (double& x : out.p.values())
        x -= mean;
    return out;
}

HeatUpdate Integrator::heat_step(const State& state, const ChemFields& chem, const SourceTerms& src) const
{
    require_same_grid(state.spec(), spec_, "heat_step");
    const double dt = cfg_.dt;
    const double rho0 = params_.rho0;
    const double inv_cap = 1.0 / (rho0 * params_.spec_heat);

    const ScalarField visc = thermo::viscous_integrand(state.v, state.c, params_);
    const ScalarField chem_diss = thermo::chemical_integrand(chem.mu, state.c, params_);
    const ScalarField cond = thermo::heat_conduction(state.theta, params_);
    const ScalarField transport = grid::conservative_advection(state.theta, state.v);

    HeatUpdate out{state.theta, 0};
    for (std::size_t k = 0; k < out.theta.size(); ++k) {
        const double th = state.theta[k];
        double source = visc[k] + chem_diss[k] + cond[k] +
                        rho0 * th * material::G_prime(state.c[k]) * chem.c_dot[k];
        if (src.r)
            source += rho0 * (*src.r)[k];
        double next = th + dt * (source * inv_cap - transport[k]);
        if (!(next >= kThetaFloor)) {
            next = kThetaFloor;
            ++out.floor_hits;
        }
        out.theta[k] = next;
    }
    return out;
}

StepOutput Integrator::coupled_step(const State& state, const SourceTerms& src) const
{
    ChemFields chem = ch_rhs(state, params_);
    ScalarField c_next = ch_step(state, chem);
    FlowUpdate flow = ns_step(state, chem, src);
    const State mid{state.c, flow.v, flow.p, state.theta, state.t};
    HeatUpdate heat = heat_step(mid, chem, src);

    State next{std::move(c_next), std::move(flow.v), std::move(flow.p), std::move(heat.theta),
               state.t + cfg_.dt};
    if (!next.c.all_finite() || !next.v.all_finite() || !next.theta.all_finite())
        throw SolverError("coupled_step", 0, "non-finite values after step at t = " + std::to_string(next.t));
    return StepOutput{std::move(next), std::move(chem), heat.floor_hits};
}

ScalarField ch_step(const State& state, const MaterialParams& params, const StepConfig& cfg)
{
    const Integrator integ(state.spec(), params, cfg);
    return integ.ch_step(state, ch_rhs(state, params));
}

FlowUpdate ns_step(const State& state, const ChemFields& chem, const SourceTerms& src,
                   const MaterialParams& params, const StepConfig& cfg)
{
    return Integrator(state.spec(), params, cfg).ns_step(state, chem, src);
}

HeatUpdate heat_step(const State& state, const ChemFields& chem, const SourceTerms& src,
                     const MaterialParams& params, const StepConfig& cfg)
{
    return Integrator(state.spec(), params, cfg).heat_step(state, chem, src);
}

State coupled_step(const State& state, const SourceTerms& src, const MaterialParams& params,
                   const StepConfig& cfg)
{
    return Integrator(state.spec(), params, cfg).coupled_step(state, src).state;
}

}  // namespace dynamics
}  // namespace phasesep
