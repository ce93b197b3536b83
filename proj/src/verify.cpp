#include "phasesep/verify.hpp"

#include "phasesep/simulation.hpp"
#include "phasesep/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace phasesep {

bool CheckReport::all_pass() const
{
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
}

namespace verify {

namespace {

constexpr double kPi = std::numbers::pi;

double least_squares_slope(const std::vector<double>& t, const std::vector<double>& y)
{
    const double n = static_cast<double>(t.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        st += t[k];
        sy += y[k];
    }
    const double tm = st / n, ym = sy / n;
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        num += (t[k] - tm) * (y[k] - ym);
        den += (t[k] - tm) * (t[k] - tm);
    }
    return num / den;
}

// Projection of c onto sin/cos(k x). `impurity` is the largest pointwise
// deviation from mean + fitted mode, which grows once roundoff seeds faster
// modes.
struct ModeFit {
    double amplitude = 0.0;
    double impurity = 0.0;
};

class ModeProjector {
public:
    ModeProjector(const GridSpec& g, double k) : sin_(static_cast<std::size_t>(g.nx())), cos_(sin_.size())
    {
        for (int i = 0; i < g.nx(); ++i) {
            sin_[static_cast<std::size_t>(i)] = std::sin(k * g.x(i));
            cos_[static_cast<std::size_t>(i)] = std::cos(k * g.x(i));
        }
    }

    ModeFit operator()(const ScalarField& c) const
    {
        const GridSpec& g = c.spec();
        double mean = 0.0;
        for (double v : c.values())
            mean += v;
        mean /= static_cast<double>(c.size());
        double a = 0.0, b = 0.0;
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) {
                a += (c(i, j) - mean) * sin_[static_cast<std::size_t>(i)];
                b += (c(i, j) - mean) * cos_[static_cast<std::size_t>(i)];
            }
        const double scale = 2.0 / static_cast<double>(c.size());
        a *= scale;
        b *= scale;
        ModeFit fit{std::hypot(a, b), 0.0};
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) {
                const auto ii = static_cast<std::size_t>(i);
                fit.impurity = std::max(fit.impurity, std::abs(c(i, j) - mean - a * sin_[ii] - b * cos_[ii]));
            }
        return fit;
    }

private:
    std::vector<double> sin_, cos_;
};

void require_finite(const ScalarField& c, const char* stage, long step)
{
    if (!c.all_finite())
        throw SolverError(stage, static_cast<int>(step), "non-finite concentration");
}

double max_ratio_floor(double a, double b) { return b > 0.0 ? a / b : 0.0; }

}  // namespace

double predicted_growth_rate(double k, double c_bar, double u, const MaterialParams& params)
{
    const double m = material::mobility(c_bar, params);
    if (params.mobility.kind == MobilityModel::Kind::Degenerate && !(m > 0.0))
        throw std::invalid_argument("predicted_growth_rate: zero mobility at c_bar = " + std::to_string(c_bar));
    const double k2 = k * k;
    return -(m * k2 / params.rho0) * (params.gamma * k2 + material::W_second(c_bar, u, params.theta0));
}

double neutral_wavenumber(double c_bar, double u, const MaterialParams& params)
{
    const double w2 = material::W_second(c_bar, u, params.theta0);
    return w2 < 0.0 ? std::sqrt(-w2 / params.gamma) : 0.0;
}

DispersionPoint measure_growth_rate(const GridSpec& grid, double k, double c_bar, double u,
                                    const MaterialParams& params, const StepConfig& cfg, const GrowthOptions& opts)
{
    if (grid.bc() != BcMode::Periodic)
        throw std::invalid_argument("measure_growth_rate: periodic grid required");
    if (!(k > 0.0))
        throw std::invalid_argument("measure_growth_rate: k must be positive");
    const double m = k * grid.lx() / (2.0 * kPi);
    if (std::abs(m - std::round(m)) > 1e-9 * std::max(1.0, m))
        throw std::invalid_argument("measure_growth_rate: k = " + std::to_string(k) +
                                    " is not a multiple of 2 pi / lx");
    if (!(opts.epsilon > 0.0) || opts.epsilon > 1e-4)
        throw std::invalid_argument("measure_growth_rate: epsilon must lie in (0, 1e-4]");

    DispersionPoint pt;
    pt.k = k;
    pt.sigma_predicted = predicted_growth_rate(k, c_bar, u, params);

    const double eps = opts.epsilon;
    ScalarField c = ScalarField::from_function(grid, [&](double x, double) { return c_bar + eps * std::sin(k * x); });
    const ScalarField u_field(grid, u);
    dynamics::Integrator integ(grid, params, cfg);

    const ModeProjector project(grid, k);
    std::vector<double> ts{0.0}, amps{project(c).amplitude};
    const long max_steps = steps_for(opts.t_max, cfg.dt);
    for (long n = 1; n <= max_steps; ++n) {
        c = integ.ch_step_frozen(c, u_field);
        require_finite(c, "measure_growth_rate", n);
        const ModeFit fit = project(c);
        if (fit.impurity > opts.max_impurity * fit.amplitude)
            break;
        ts.push_back(static_cast<double>(n) * cfg.dt);
        amps.push_back(fit.amplitude);
        if (fit.amplitude > opts.growth_cap || fit.amplitude < opts.decay_floor * eps)
            break;
    }

    const bool growing = amps.back() > eps;
    const double lo = growing ? 2.0 * eps : opts.decay_floor * eps;
    const double hi = growing ? opts.growth_cap : 0.5 * eps;
    std::vector<double> fit_t, fit_y;
    for (std::size_t s = 0; s < ts.size(); ++s)
        if (amps[s] >= lo && amps[s] <= hi && amps[s] > 0.0) {
            fit_t.push_back(ts[s]);
            fit_y.push_back(std::log(amps[s]));
        }
    if (fit_t.size() < 3)
        throw MeasurementError("measure_growth_rate: fit window empty for k = " + std::to_string(k) +
                               " (final amplitude " + std::to_string(amps.back()) + ")");

    pt.fit_samples = static_cast<int>(fit_t.size());
    pt.sigma_measured = least_squares_slope(fit_t, fit_y);
    pt.rel_error = std::abs(pt.sigma_measured - pt.sigma_predicted) / std::max(std::abs(pt.sigma_predicted), 1e-12);
    return pt;
}

ScalarField noisy_field(const GridSpec& grid, double c_bar, double amplitude, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    ScalarField c(grid, c_bar);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        c[k] += amplitude * (2.0 * unit - 1.0);
    }
    return c;
}

double perturbation_norm(const ScalarField& c)
{
    double mean = 0.0;
    for (double v : c.values())
        mean += v;
    mean /= static_cast<double>(c.size());
    double s = 0.0;
    for (double v : c.values())
        s += (v - mean) * (v - mean);
    return std::sqrt(s * c.spec().cell_area());
}

ThresholdResult frozen_flow_run(const ScalarField& c0, const ScalarField& theta, const VectorField& v,
                                const MaterialParams& params, const StepConfig& cfg, double run_time,
                                double growth_threshold)
{
    const ScalarField u = material::effective_u_field(theta, v);
    dynamics::Integrator integ(c0.spec(), params, cfg);
    ScalarField c = c0;
    const long steps = steps_for(run_time, cfg.dt);
    for (long n = 1; n <= steps; ++n) {
        c = integ.ch_step_frozen(c, u);
        require_finite(c, "frozen_flow_run", n);
    }
    ThresholdResult r;
    r.u = u.min();
    r.amplitude_ratio = max_ratio_floor(perturbation_norm(c), perturbation_norm(c0));
    r.grew = r.amplitude_ratio > growth_threshold;
    return r;
}

ThresholdResult threshold_run(const GridSpec& grid, double u, const MaterialParams& params, const StepConfig& cfg,
                              const SweepOptions& opts)
{
    const ScalarField c0 = noisy_field(grid, opts.c_bar, opts.noise_amplitude, opts.seed);
    ThresholdResult r =
        frozen_flow_run(c0, ScalarField(grid, u), VectorField(grid), params, cfg, opts.run_time, opts.growth_threshold);
    r.u = u;
    return r;
}

std::vector<ThresholdResult> spinodal_sweep(const GridSpec& grid, const std::vector<double>& u_values,
                                            const MaterialParams& params, const StepConfig& cfg,
                                            const SweepOptions& opts)
{
    std::vector<ThresholdResult> out;
    out.reserve(u_values.size());
    for (double u : u_values)
        out.push_back(threshold_run(grid, u, params, cfg, opts));
    return out;
}

ThresholdBracket locate_threshold(const GridSpec& grid, double u_lo, double u_hi, double tol,
                                  const MaterialParams& params, const StepConfig& cfg, const SweepOptions& opts)
{
    if (!(u_hi > u_lo) || !(tol > 0.0))
        throw std::invalid_argument("locate_threshold: need u_lo < u_hi and tol > 0");
    ThresholdBracket b;
    b.runs.push_back(threshold_run(grid, u_lo, params, cfg, opts));
    b.runs.push_back(threshold_run(grid, u_hi, params, cfg, opts));
    if (!b.runs[0].grew || b.runs[1].grew)
        throw MeasurementError("locate_threshold: [" + std::to_string(u_lo) + ", " + std::to_string(u_hi) +
                               "] does not bracket the growth transition");
    b.lower = u_lo;
    b.upper = u_hi;
    while (b.upper - b.lower > tol) {
        const double mid = 0.5 * (b.lower + b.upper);
        b.runs.push_back(threshold_run(grid, mid, params, cfg, opts));
        (b.runs.back().grew ? b.lower : b.upper) = mid;
    }
    b.estimate = 0.5 * (b.lower + b.upper);
    return b;
}

VectorField rigid_rotation(const GridSpec& grid, double rate)
{
    const double xc = 0.5 * grid.lx(), yc = 0.5 * grid.ly();
    return VectorField(ScalarField::from_function(grid, [&](double, double y) { return -rate * (y - yc); }),
                       ScalarField::from_function(grid, [&](double x, double) { return rate * (x - xc); }));
}

StirReport curl_suppression_experiment(const GridSpec& grid, const MaterialParams& params, const StepConfig& cfg,
                                       const StirOptions& opts)
{
    if (grid.bc() != BcMode::Physical)
        throw std::invalid_argument("curl_suppression_experiment: Physical grid required");
    StirReport rep;
    rep.required_omega_sq = params.theta0 - opts.theta;
    const ScalarField c0 = noisy_field(grid, 0.0, opts.noise_amplitude, opts.seed);
    const ScalarField theta(grid, opts.theta);
    const VectorField v = rigid_rotation(grid, opts.stir_rate);
    const ScalarField omega = grid::curl2d(v);
    rep.min_omega_sq = hadamard(omega, omega).min();
    rep.quiescent = frozen_flow_run(c0, theta, VectorField(grid), params, cfg, opts.run_time);
    rep.stirred = frozen_flow_run(c0, theta, v, params, cfg, opts.run_time);
    return rep;
}

namespace {

struct Lemma1Sample {
    ScalarField g, g_t;
    VectorField v;
};

Lemma1Sample lemma1_fields(Lemma1Field field, Lemma1Velocity velocity, double t, const GridSpec& grid)
{
    auto sample = [&](auto fn) { return ScalarField::from_function(grid, fn); };
    Lemma1Sample s{ScalarField(grid), ScalarField(grid), VectorField(grid)};
    switch (field) {
    case Lemma1Field::Static:
        s.g = sample([](double x, double y) { return std::sin(x) * std::cos(y); });
        break;
    case Lemma1Field::LinearXT:
        s.g = sample([t](double x, double) { return x * t; });
        s.g_t = sample([](double x, double) { return x; });
        break;
    case Lemma1Field::Trig:
        s.g = sample([t](double x, double y) { return std::sin(x - t) * std::cos(y); });
        s.g_t = sample([t](double x, double y) { return -std::cos(x - t) * std::cos(y); });
        break;
    }
    switch (velocity) {
    case Lemma1Velocity::Zero:
        break;
    case Lemma1Velocity::Uniform:
        s.v.x = ScalarField(grid, 1.0);
        break;
    case Lemma1Velocity::Cellular:
        s.v = VectorField(sample([](double x, double y) { return std::sin(x) * std::cos(y); }),
                          sample([](double x, double y) { return -std::cos(x) * std::sin(y); }));
        break;
    }
    return s;
}

}  // namespace

double lemma1_check(Lemma1Field field, Lemma1Velocity velocity, double t, const GridSpec& grid)
{
    const Lemma1Sample s = lemma1_fields(field, velocity, t, grid);
    const VectorField grad_g = grid::gradient(s.g);

    // Material derivative of grad g along the flow.
    const VectorField grad_gt = grid::gradient(s.g_t);
    const ScalarField lhs_x = grad_gt.x + grid::advect(grad_g.x, s.v);
    const ScalarField lhs_y = grad_gt.y + grid::advect(grad_g.y, s.v);

    // grad(g_dot) - (grad v)^T grad g.
    const ScalarField g_dot = s.g_t + grid::advect(s.g, s.v);
    const VectorField grad_gdot = grid::gradient(g_dot);
    const TensorField gv = grid::velocity_gradient(s.v);
    const ScalarField rhs_x = grad_gdot.x - hadamard(gv.xx, grad_g.x) - hadamard(gv.yx, grad_g.y);
    const ScalarField rhs_y = grad_gdot.y - hadamard(gv.xy, grad_g.x) - hadamard(gv.yy, grad_g.y);

    double res = 0.0;
    for (int j = 2; j < grid.ny() - 2; ++j)
        for (int i = 2; i < grid.nx() - 2; ++i)
            res = std::max({res, std::abs(lhs_x(i, j) - rhs_x(i, j)), std::abs(lhs_y(i, j) - rhs_y(i, j))});
    return res;
}

namespace {

void finish_row(OrderRow& row)
{
    row.min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < row.errors.size(); ++k)
        row.min_ratio = std::min(row.min_ratio, max_ratio_floor(row.errors[k - 1], row.errors[k]));
}

const std::vector<int> kOrderLevels{32, 64, 128};

double max_diff(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs(); }

}  // namespace

OrderRow lemma1_convergence(double t)
{
    OrderRow row{"lemma1_trig_cellular", kOrderLevels, {}, 0.0};
    for (int n : kOrderLevels)
        row.errors.push_back(lemma1_check(Lemma1Field::Trig, Lemma1Velocity::Cellular, t,
                                          GridSpec(n, n, 2.0 * kPi, 2.0 * kPi, BcMode::Periodic)));
    finish_row(row);
    return row;
}

OperatorOrderReport operator_order_suite()
{
    OperatorOrderReport rep;
    OrderRow grad{"gradient", kOrderLevels, {}, 0.0};
    OrderRow div{"divergence", kOrderLevels, {}, 0.0};
    OrderRow lap{"laplacian", kOrderLevels, {}, 0.0};
    OrderRow lap_n{"laplacian_neumann", kOrderLevels, {}, 0.0};
    OrderRow bih{"biharmonic", kOrderLevels, {}, 0.0};
    OrderRow curl{"curl", kOrderLevels, {}, 0.0};

    for (int n : kOrderLevels) {
        const GridSpec g(n, n, 2.0 * kPi, 2.0 * kPi, BcMode::Periodic);
        auto s = [&](auto fn) { return ScalarField::from_function(g, fn); };
        const ScalarField f = s([](double x, double y) { return std::sin(x) * std::cos(2.0 * y); });

        const VectorField gf = grid::gradient(f);
        grad.errors.push_back(std::max(
            max_diff(gf.x, s([](double x, double y) { return std::cos(x) * std::cos(2.0 * y); })),
            max_diff(gf.y, s([](double x, double y) { return -2.0 * std::sin(x) * std::sin(2.0 * y); }))));

        const VectorField F(s([](double x, double y) { return std::sin(x) * std::cos(y); }),
                            s([](double x, double y) { return std::cos(x) * std::sin(2.0 * y); }));
        div.errors.push_back(max_diff(grid::divergence(F), s([](double x, double y) {
                                          return std::cos(x) * std::cos(y) + 2.0 * std::cos(x) * std::cos(2.0 * y);
                                      })));

        lap.errors.push_back(max_diff(grid::laplacian(f), -5.0 * f));
        bih.errors.push_back(max_diff(grid::biharmonic(f), 25.0 * f));

        const VectorField w(s([](double x, double y) { return std::sin(2.0 * y) * std::cos(x); }),
                            s([](double x, double y) { return std::sin(x) * std::cos(y); }));
        curl.errors.push_back(max_diff(grid::curl2d(w), s([](double x, double y) {
                                           return std::cos(x) * std::cos(y) - 2.0 * std::cos(2.0 * y) * std::cos(x);
                                       })));

        // cos x cos y has zero normal derivative on the walls of [0, pi]^2.
        const GridSpec gp(n, n, kPi, kPi, BcMode::Physical);
        const ScalarField h = ScalarField::from_function(gp, [](double x, double y) { return std::cos(x) * std::cos(y); });
        lap_n.errors.push_back(max_diff(grid::laplacian(h), -2.0 * h));
    }
    for (OrderRow* r : {&grad, &div, &lap, &lap_n, &bih, &curl}) {
        finish_row(*r);
        rep.rows.push_back(std::move(*r));
    }

    // Adjointness and conservation on random data.
    for (BcMode bc : {BcMode::Periodic, BcMode::Physical}) {
        const GridSpec g(32, 24, 1.3, 0.9, bc);
        const ScalarField f = noisy_field(g, 0.0, 1.0, 11);
        const VectorField F(noisy_field(g, 0.0, 1.0, 12), noisy_field(g, 0.0, 1.0, 13));
        const VectorField gf = grid::gradient(f);
        const double lhs = grid::integrate(hadamard(gf.x, F.x) + hadamard(gf.y, F.y));
        const double rhs = grid::integrate(hadamard(f, grid::divergence(F)));
        const double scale = std::sqrt(grid::integrate(hadamard(gf.x, gf.x) + hadamard(gf.y, gf.y)) *
                                       grid::integrate(hadamard(F.x, F.x) + hadamard(F.y, F.y)));
        rep.adjoint_error = std::max(rep.adjoint_error, std::abs(lhs + rhs) / scale);

        // Scale-free: |int op f| / int |op f|, since op f can be O(dx^-4).
        auto rel_integral = [](const ScalarField& h) {
            ScalarField a = h;
            for (double& v : a.values())
                v = std::abs(v);
            return std::abs(grid::integrate(h)) / grid::integrate(a);
        };
        const double cons = std::max({rel_integral(grid::laplacian(f)), rel_integral(grid::biharmonic(f)),
                                      rel_integral(grid::face_divergence(grid::face_gradient(f))),
                                      rel_integral(grid::conservative_advection(f, F)),
                                      rel_integral(grid::divergence(F))});
        rep.conservation_error = std::max(rep.conservation_error, cons);
    }
    return rep;
}

CheckReport run_check_suite()
{
    CheckReport rep;
    auto add = [&](std::string name, double value, double threshold, bool at_least = false) {
        rep.lines.push_back({std::move(name), value, threshold, at_least ? value >= threshold : value <= threshold});
    };

    const GridSpec g64(64, 64, 2.0 * kPi, 2.0 * kPi, BcMode::Periodic);
    add("lemma1_static_zero", lemma1_check(Lemma1Field::Static, Lemma1Velocity::Zero, 0.3, g64), 1e-12);
    add("lemma1_linear_uniform", lemma1_check(Lemma1Field::LinearXT, Lemma1Velocity::Uniform, 0.3, g64), 1e-10);
    add("lemma1_trig_cellular_ratio", lemma1_convergence().min_ratio, 3.5, true);

    const MaterialParams params;
    const RestrictionReport rr = thermo::thermo_restriction_check(params, thermo::random_thermo_samples(100, 2024));
    add("restriction_dpsi_dtheta", rr.theta_rel_error, 1e-6);
    add("restriction_dpsi_dc", rr.c_rel_error, 1e-6);
    add("restriction_dpsi_dgradc", rr.grad_c_rel_error, 1e-6);
    add("identity_psi_e_theta_eta", rr.identity_rel_error, 1e-12);

    const OperatorOrderReport ops = operator_order_suite();
    for (const OrderRow& row : ops.rows)
        add("order_" + row.name, row.min_ratio, 3.5, true);
    add("adjointness", ops.adjoint_error, 1e-10);
    add("conservation", ops.conservation_error, 1e-12);
    return rep;
}

}  // namespace verify
}  // namespace phasesep
