#include "phasesep/dissipation.hpp"

namespace phasesep::thermo {

ScalarField velocity_gradient_sq(const VectorField& v)
{
    const TensorField g = grid::velocity_gradient(v);
    ScalarField out(v.spec());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = g.xx[k] * g.xx[k] + g.xy[k] * g.xy[k] + g.yx[k] * g.yx[k] + g.yy[k] * g.yy[k];
    return out;
}

ScalarField transpose_contraction(const VectorField& v)
{
    const TensorField g = grid::velocity_gradient(v);
    ScalarField out(v.spec());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = g.xx[k] * g.xx[k] + 2.0 * g.xy[k] * g.yx[k] + g.yy[k] * g.yy[k];
    return out;
}

ScalarField viscous_integrand(const VectorField& v, const ScalarField& c, const MaterialParams& params)
{
    require_same_grid(v.spec(), c.spec(), "viscous_integrand");
    const TensorField g = grid::velocity_gradient(v);
    ScalarField out(v.spec());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double shear = g.xy[k] + g.yx[k];
        const double twice_dd = 2.0 * g.xx[k] * g.xx[k] + 2.0 * g.yy[k] * g.yy[k] + shear * shear;
        out[k] = material::viscosity(c[k], params) * twice_dd;
    }
    return out;
}

ScalarField chemical_integrand(const ScalarField& mu, const ScalarField& c, const MaterialParams& params)
{
    require_same_grid(mu.spec(), c.spec(), "chemical_integrand");
    const FaceField dmu = grid::face_gradient(mu);
    FaceField weighted = material::mobility_faces(c, params);
    weighted *= dmu;
    return grid::face_product_to_cells(weighted, dmu);
}

ScalarField thermal_integrand(const ScalarField& theta, const MaterialParams& params)
{
    const FaceField dtheta = grid::face_gradient(theta);
    FaceField weighted = material::conductivity_faces(theta, params);
    weighted *= dtheta;
    ScalarField out = grid::face_product_to_cells(weighted, dtheta);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] /= theta[k];
    return out;
}

ScalarField heat_conduction(const ScalarField& theta, const MaterialParams& params)
{
    FaceField flux = material::conductivity_faces(theta, params);
    flux *= grid::face_gradient(theta);
    return grid::face_divergence(flux);
}

}  // namespace phasesep::thermo
