#pragma once

// Constitutive functions of the generalised Cahn-Hilliard model with the
// double-well F(c) = c^4/4 - c^2/2 and G(c) = c^2/2, so that for fixed
// u = theta + |curl v|^2 the bulk potential is W(c) = theta0 F(c) + u G(c).

#include "phasesep/grid.hpp"

#include <optional>

namespace phasesep {

struct MobilityModel {
    enum class Kind { Constant, Degenerate };
    Kind kind = Kind::Constant;
    double m0 = 1.0;
};

struct MaterialParams {
    double rho0 = 1.0;
    double gamma = 0.01;
    double theta0 = 1.0;
    MobilityModel mobility{};
    double nu_a = 0.1;       ///< viscosity of the c = -1 phase
    double nu_b = 0.1;       ///< viscosity of the c = +1 phase
    double kappa0 = 0.01;
    double spec_heat = 1.0;

    /// Throws std::invalid_argument naming the first offending parameter.
    void validate() const;
};

struct SpinodalResult {
    bool separates = false;
    std::optional<double> c1;
};

namespace material {

inline double F_val(double c) { return 0.25 * c * c * c * c - 0.5 * c * c; }
inline double F_prime(double c) { return c * c * c - c; }
inline double G_val(double c) { return 0.5 * c * c; }
inline double G_prime(double c) { return c; }

inline double effective_u(double theta, double omega) { return theta + omega * omega; }

inline double W_val(double c, double u, double theta0) { return theta0 * F_val(c) + u * G_val(c); }
inline double W_prime(double c, double u, double theta0) { return theta0 * F_prime(c) + u * G_prime(c); }
inline double W_second(double c, double u, double theta0) { return 3.0 * theta0 * c * c + u - theta0; }

/// Half-width of the interval where W'' < 0. Throws for theta0 <= 0 or u < 0.
SpinodalResult spinodal_interval(double theta0, double u);

double mobility(double c, const MaterialParams& params);
/// Linear blend between nu_a (c = -1) and nu_b (c = +1), c clamped to [-1, 1].
double viscosity(double c, const MaterialParams& params);
double conductivity(double theta, const MaterialParams& params);

/// K(c) = M(c) W''(c).
double diffusivity_K(double c, double u, const MaterialParams& params);

/// u = theta + curl(v)^2 sampled on the grid.
ScalarField effective_u_field(const ScalarField& theta, const VectorField& v);

/// mu = -gamma lap(c) + theta0 F'(c) + u G'(c) for a given u field.
ScalarField chemical_potential_u(const ScalarField& c, const ScalarField& u, const MaterialParams& params);

ScalarField chemical_potential(const ScalarField& c, const ScalarField& theta, const VectorField& v,
                               const MaterialParams& params);

ScalarField mobility_field(const ScalarField& c, const MaterialParams& params);
ScalarField viscosity_field(const ScalarField& c, const MaterialParams& params);
/// Mobility on cell faces, mean of the two adjacent cell mobilities.
FaceField mobility_faces(const ScalarField& c, const MaterialParams& params);
/// Conductivity on cell faces.
FaceField conductivity_faces(const ScalarField& theta, const MaterialParams& params);

}  // namespace material
}  // namespace phasesep
