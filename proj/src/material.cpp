#include "phasesep/material.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace phasesep {

void MaterialParams::validate() const
{
    auto positive = [](double value, const char* name) {
        if (!(value > 0.0) || !std::isfinite(value))
            throw std::invalid_argument(std::string(name) + " must be strictly positive, got " +
                                        std::to_string(value));
    };
    positive(rho0, "rho0");
    positive(gamma, "gamma");
    positive(theta0, "theta0");
    positive(mobility.m0, "M0");
    positive(nu_a, "nu_A");
    positive(nu_b, "nu_B");
    positive(kappa0, "kappa0");
    positive(spec_heat, "spec_heat");
}

namespace material {

SpinodalResult spinodal_interval(double theta0, double u)
{
    if (!(theta0 > 0.0))
        throw std::invalid_argument("spinodal_interval: theta0 must be positive");
    if (!(u >= 0.0))
        throw std::invalid_argument("spinodal_interval: u must be non-negative");
    if (u >= theta0)
        return {};
    return SpinodalResult{true, std::sqrt((theta0 - u) / (3.0 * theta0))};
}

double mobility(double c, const MaterialParams& params)
{
    const double m0 = params.mobility.m0;
    if (params.mobility.kind == MobilityModel::Kind::Constant)
        return m0;
    return m0 * std::max(0.0, 1.0 - c * c);
}

double viscosity(double c, const MaterialParams& params)
{
    const double ch = std::clamp(c, -1.0, 1.0);
    return params.nu_a * 0.5 * (1.0 - ch) + params.nu_b * 0.5 * (1.0 + ch);
}

double conductivity(double /*theta*/, const MaterialParams& params)
{
    return params.kappa0;
}

double diffusivity_K(double c, double u, const MaterialParams& params)
{
    return mobility(c, params) * W_second(c, u, params.theta0);
}

ScalarField effective_u_field(const ScalarField& theta, const VectorField& v)
{
    require_same_grid(theta.spec(), v.spec(), "effective_u_field");
    const ScalarField omega = grid::curl2d(v);
    ScalarField u(theta.spec());
    for (std::size_t k = 0; k < u.size(); ++k)
        u[k] = effective_u(theta[k], omega[k]);
    return u;
}

ScalarField chemical_potential_u(const ScalarField& c, const ScalarField& u, const MaterialParams& params)
{
    require_same_grid(c.spec(), u.spec(), "chemical_potential");
    ScalarField mu = grid::laplacian(c);
    for (std::size_t k = 0; k < mu.size(); ++k)
        mu[k] = -params.gamma * mu[k] + params.theta0 * F_prime(c[k]) + u[k] * G_prime(c[k]);
    return mu;
}

ScalarField chemical_potential(const ScalarField& c, const ScalarField& theta, const VectorField& v,
                               const MaterialParams& params)
{
    require_same_grid(c.spec(), theta.spec(), "chemical_potential");
    return chemical_potential_u(c, effective_u_field(theta, v), params);
}

ScalarField mobility_field(const ScalarField& c, const MaterialParams& params)
{
    ScalarField m(c.spec());
    for (std::size_t k = 0; k < m.size(); ++k)
        m[k] = mobility(c[k], params);
    return m;
}

ScalarField viscosity_field(const ScalarField& c, const MaterialParams& params)
{
    ScalarField nu(c.spec());
    for (std::size_t k = 0; k < nu.size(); ++k)
        nu[k] = viscosity(c[k], params);
    return nu;
}

FaceField mobility_faces(const ScalarField& c, const MaterialParams& params)
{
    return grid::face_average(mobility_field(c, params), Parity::Even);
}

FaceField conductivity_faces(const ScalarField& theta, const MaterialParams& params)
{
    ScalarField k(theta.spec());
    for (std::size_t n = 0; n < k.size(); ++n)
        k[n] = conductivity(theta[n], params);
    return grid::face_average(k, Parity::Even);
}

}  // namespace material
}  // namespace phasesep
