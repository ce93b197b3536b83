#pragma once

// Energy and entropy functionals and the per-step thermodynamic audit.
//
// Closed forms with e0(theta) = C theta (C = spec_heat):
//   e   = C theta + theta0 F(c) + gamma/2 |grad c|^2
//   psi = theta0 F(c) + theta G(c) + gamma/2 |grad c|^2 + C theta (1 - ln theta)
//   eta = -d psi / d theta = -G(c) + C ln theta
// so that psi = e - theta eta holds identically.

#include "phasesep/dissipation.hpp"
#include "phasesep/dynamics.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace phasesep {

struct EnergyReport {
    double kinetic = 0.0;       ///< int rho0 v^2 / 2
    double internal = 0.0;      ///< int rho0 e
    double free_energy = 0.0;   ///< int rho0 psi
    double entropy = 0.0;       ///< int rho0 eta
    double mass_diff = 0.0;     ///< int rho0 c = m_A - m_B
};

struct DissipationReport {
    double viscous = 0.0;
    double chemical = 0.0;
    double thermal = 0.0;
    double heat_absorption = 0.0;   ///< int rho0 h = int (-div q + rho0 r)
};

struct AuditReport {
    long step = 0;
    double time = 0.0;
    EnergyReport energy;
    DissipationReport dissipation;
    /// int [rho0 d eta/dt + div(q/theta) - rho0 r/theta]; non-negative up to
    /// `cd_tolerance` for a consistent step.
    double cd_residual = 0.0;
    double cd_tolerance = 0.0;
    double power_identity_residual = 0.0;
    double mass_drift = 0.0;
    double energy_budget_residual = 0.0;
    int theta_floor_hits = 0;
    double min_viscous_integrand = 0.0;
    double min_chemical_integrand = 0.0;
    double min_thermal_integrand = 0.0;

    bool dissipation_nonnegative() const
    {
        return min_viscous_integrand >= 0.0 && min_chemical_integrand >= 0.0 && min_thermal_integrand >= 0.0;
    }
};

struct ThermoSample {
    double theta;
    double c;
    std::array<double, 2> grad_c;
};

struct RestrictionReport {
    double theta_rel_error = 0.0;     ///< d psi/d theta against -eta
    double c_rel_error = 0.0;         ///< d psi/d c against theta0 F' + theta G'
    double grad_c_rel_error = 0.0;    ///< d psi/d grad c against gamma grad c
    double identity_rel_error = 0.0;  ///< psi against e - theta eta
    int samples = 0;
};

namespace thermo {

/// Relative CD tolerance per unit domain measure.
inline constexpr double kCdToleranceDensity = 1e-6;

double internal_energy_density(double theta, double c, std::array<double, 2> grad_c, const MaterialParams& params);
double free_energy_density(double theta, double c, std::array<double, 2> grad_c, const MaterialParams& params);
double entropy_density(double theta, double c, const MaterialParams& params);

/// `n` states with theta in [0.1, 3], c in [-1.5, 1.5], grad c in [-2, 2]^2.
std::vector<ThermoSample> random_thermo_samples(int n, std::uint64_t seed);

/// Centred finite differences of the implemented psi against the closed-form
/// restrictions. Error metric |fd - exact| / max(|exact|, 1).
RestrictionReport thermo_restriction_check(const MaterialParams& params, const std::vector<ThermoSample>& samples);

double mass_diff(const ScalarField& c, const MaterialParams& params);
/// |current - reference| / max(|reference|, 1).
double relative_mass_drift(double reference, double current);

EnergyReport energy_report(const State& state, const MaterialParams& params);

/// int [theta0 F(c) + u G(c) + gamma/2 |grad c|^2] with the face-difference
/// gradient that matches the discrete Laplacian.
double lyapunov_functional(const ScalarField& c, const ScalarField& u, const MaterialParams& params);

/// Audit of one coupled step `before -> after` produced with `chem` (the
/// chemical fields of `before`). `reference_mass` is the initial int rho0 c.
AuditReport audit_step(const State& before, const State& after, const ChemFields& chem, const SourceTerms& src,
                       const MaterialParams& params, const StepConfig& cfg, double reference_mass,
                       int theta_floor_hits = 0);

/// Audit row for a state with no step taken (all rates zero).
AuditReport initial_report(const State& state, const MaterialParams& params);

}  // namespace thermo
}  // namespace phasesep
