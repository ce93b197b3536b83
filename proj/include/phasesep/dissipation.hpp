#pragma once

// Pointwise dissipation integrands shared by the heat equation and the
// thermodynamic audit.

#include "phasesep/grid.hpp"
#include "phasesep/material.hpp"

namespace phasesep::thermo {

/// |grad v|^2 = sum_ab (d_b v_a)^2.
ScalarField velocity_gradient_sq(const VectorField& v);
/// (grad v)^T : grad v = tr(grad v grad v). Can be negative on its own.
ScalarField transpose_contraction(const VectorField& v);
/// nu(c) [|grad v|^2 + (grad v)^T : grad v] = 2 nu D : D, evaluated in the
/// sum-of-squares form so it is non-negative in floating point as well.
ScalarField viscous_integrand(const VectorField& v, const ScalarField& c, const MaterialParams& params);
/// M(c) |grad mu|^2 from face differences.
ScalarField chemical_integrand(const ScalarField& mu, const ScalarField& c, const MaterialParams& params);
/// kappa |grad theta|^2 / theta from face differences.
ScalarField thermal_integrand(const ScalarField& theta, const MaterialParams& params);
/// div(kappa grad theta) = -div q.
ScalarField heat_conduction(const ScalarField& theta, const MaterialParams& params);

}  // namespace phasesep::thermo
