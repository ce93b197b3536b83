#pragma once

// Time integration of the coupled concentration / momentum / temperature
// system. One coupled step is a first-order splitting:
//   1. chemical fields (mu, J = M grad mu, c_dot) from the old state
//   2. c  <- IMEX Cahn-Hilliard update
//   3. v,p <- explicit predictor + pressure projection, forces from old c
//   4. theta <- explicit heat update with the new v and the step-1 fields

#include "phasesep/grid.hpp"
#include "phasesep/material.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace phasesep {

class PeriodicSpectral;
class CosineSpectral;

struct State {
    ScalarField c;
    VectorField v;
    ScalarField p;
    ScalarField theta;
    double t = 0.0;

    /// Quiescent state with uniform c and theta.
    static State uniform(const GridSpec& spec, double c, double theta);

    const GridSpec& spec() const { return c.spec(); }
    /// Throws std::invalid_argument on grid mismatch, non-finite values or
    /// non-positive temperature.
    void validate() const;
};

struct SourceTerms {
    std::optional<VectorField> b;   ///< body force per unit mass
    std::optional<ScalarField> r;   ///< external heat supply
};

struct StepConfig {
    double dt = 1e-3;
    double stabilization_s = 0.0;
    double projection_tol = 1e-10;
    int max_linear_iters = 10000;

    void validate() const;
};

struct ChemFields {
    ScalarField mu;
    FaceField flux_J;     ///< M(c) grad mu, normal component per face
    ScalarField c_dot;    ///< material derivative of c, div(J) / rho0
};

/// Numerical failure of a sub-step (linear solver or projection).
class SolverError : public std::runtime_error {
public:
    SolverError(std::string stage, int iterations, const std::string& what);
    const std::string& stage() const { return stage_; }
    int iterations() const { return iterations_; }

private:
    std::string stage_;
    int iterations_;
};

inline constexpr double kThetaFloor = 1e-8;

namespace dynamics {

ChemFields ch_rhs(const State& state, const MaterialParams& params);
/// Chemical fields for a prescribed effective temperature u = theta + w^2.
ChemFields ch_rhs_frozen(const ScalarField& c, const ScalarField& u, const MaterialParams& params);

/// -gamma rho0 div(grad c (x) grad c).
VectorField ericksen_force(const ScalarField& c, const MaterialParams& params);
/// rho0 curl(g curl v) with g = G'(c) c_dot; in 2D rho0 (d_y(g w), -d_x(g w)).
VectorField skew_force(const ScalarField& c_dot, const ScalarField& c, const VectorField& v,
                       const MaterialParams& params);
/// div(2 nu(c) D) for a divergence-free v.
VectorField viscous_force(const VectorField& v, const ScalarField& c, const MaterialParams& params);

/// Largest dt for which the explicit viscous, skew and conduction terms
/// stay inside the forward-Euler diffusion limit, together with the
/// advective limit 2 nu / |v|^2 of central differencing and the
/// h^4 / (32 M G'^2 w^2) limit of the explicit c_dot / vorticity feedback.
double stable_dt_estimate(const State& state, const ChemFields& chem, const MaterialParams& params);

struct FlowUpdate {
    VectorField v;
    ScalarField p;
};

struct HeatUpdate {
    ScalarField theta;
    int floor_hits = 0;
};

struct StepOutput {
    State state;
    ChemFields chem;
    int theta_floor_hits = 0;
};

/// Owns the per-grid solver workspace. Not thread-safe; use one instance per
/// simulation.
class Integrator {
public:
    Integrator(const GridSpec& spec, const MaterialParams& params, const StepConfig& cfg);
    ~Integrator();
    Integrator(Integrator&&) noexcept;
    Integrator& operator=(Integrator&&) noexcept;

    const GridSpec& spec() const { return spec_; }
    const MaterialParams& params() const { return params_; }
    const StepConfig& config() const { return cfg_; }

    /// c^{n+1} from (I + dt A) (c^{n+1} - c^n) = dt rate(c^n) with
    /// A = (Mbar gamma / rho0) lap^2 - (s / rho0) lap, Mbar = max M(c^n).
    ScalarField ch_step(const State& state, const ChemFields& chem) const;
    /// CH-only step with frozen u and no transport.
    ScalarField ch_step_frozen(const ScalarField& c, const ScalarField& u) const;
    FlowUpdate ns_step(const State& state, const ChemFields& chem, const SourceTerms& src) const;
    HeatUpdate heat_step(const State& state, const ChemFields& chem, const SourceTerms& src) const;
    StepOutput coupled_step(const State& state, const SourceTerms& src) const;

    /// Divergence-free projection; returns the projected velocity and the
    /// potential phi with v* = v + grad(phi).
    FlowUpdate project(const VectorField& v_star) const;

private:
    ScalarField implicit_ch_update(const ScalarField& c, const ScalarField& rate, double mbar) const;

    GridSpec spec_;
    MaterialParams params_;
    StepConfig cfg_;
    std::unique_ptr<PeriodicSpectral> spectral_;
    std::unique_ptr<CosineSpectral> cosine_;   ///< CG preconditioner on Physical grids
};

// Convenience forms that build a throwaway Integrator.
ScalarField ch_step(const State& state, const MaterialParams& params, const StepConfig& cfg);
FlowUpdate ns_step(const State& state, const ChemFields& chem, const SourceTerms& src,
                   const MaterialParams& params, const StepConfig& cfg);
HeatUpdate heat_step(const State& state, const ChemFields& chem, const SourceTerms& src,
                     const MaterialParams& params, const StepConfig& cfg);
State coupled_step(const State& state, const SourceTerms& src, const MaterialParams& params,
                   const StepConfig& cfg);

}  // namespace dynamics
}  // namespace phasesep
