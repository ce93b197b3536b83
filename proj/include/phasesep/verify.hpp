#pragma once

// Independent oracles: linear dispersion of the frozen-coefficient CH
// equation, the spinodal threshold u = theta0, curl suppression, the
// gradient / material-derivative identity and operator convergence.

#include "phasesep/dynamics.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace phasesep {

/// Fit window empty or otherwise unusable measurement.
class MeasurementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DispersionPoint {
    double k = 0.0;
    double sigma_predicted = 0.0;
    double sigma_measured = 0.0;
    double rel_error = 0.0;
    int fit_samples = 0;
};

struct ThresholdResult {
    double u = 0.0;
    bool grew = false;
    double amplitude_ratio = 1.0;
};

struct GrowthOptions {
    double epsilon = 1e-5;
    double t_max = 50.0;
    /// Fit while amplitude in [2 eps, growth_cap] (growing) or
    /// [decay_floor * eps, eps / 2] (decaying).
    double growth_cap = 1e-2;
    double decay_floor = 1e-3;
    /// Stop sampling once the field departs from a single mode by more than
    /// this fraction of the mode amplitude.
    double max_impurity = 1e-2;
};

struct SweepOptions {
    double c_bar = 0.0;
    double noise_amplitude = 1e-3;
    double run_time = 100.0;
    double growth_threshold = 10.0;
    std::uint64_t seed = 1;
};

struct ThresholdBracket {
    double lower = 0.0;     ///< largest u observed to grow
    double upper = 0.0;     ///< smallest u observed not to grow
    double estimate = 0.0;  ///< midpoint
    std::vector<ThresholdResult> runs;
};

struct StirOptions {
    double theta = 0.5;
    /// Angular rate of the imposed rigid rotation; interior vorticity is twice this.
    double stir_rate = 0.4;
    double noise_amplitude = 1e-3;
    double run_time = 5.0;
    std::uint64_t seed = 7;
};

struct StirReport {
    ThresholdResult quiescent;
    ThresholdResult stirred;
    double min_omega_sq = 0.0;
    double required_omega_sq = 0.0;   ///< theta0 - theta
};

enum class Lemma1Field { Static, LinearXT, Trig };
enum class Lemma1Velocity { Zero, Uniform, Cellular };

struct OrderRow {
    std::string name;
    std::vector<int> nx;
    std::vector<double> errors;
    double min_ratio = 0.0;
};

struct OperatorOrderReport {
    std::vector<OrderRow> rows;
    double adjoint_error = 0.0;        ///< |<grad f, F> + <f, div F>| / (|grad f| |F|)
    double conservation_error = 0.0;   ///< max |int op f| / int |op f| over conservative operators
};

struct CheckLine {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct CheckReport {
    std::vector<CheckLine> lines;
    bool all_pass() const;
};

namespace verify {

/// sigma(k) = -(M(c_bar) k^2 / rho0) (gamma k^2 + W''(c_bar; u)).
double predicted_growth_rate(double k, double c_bar, double u, const MaterialParams& params);

/// Neutral wavenumber sqrt(-W''/gamma); zero when the mixed state is stable.
double neutral_wavenumber(double c_bar, double u, const MaterialParams& params);

/// Seeds c = c_bar + eps sin(k x) on a periodic grid, steps the frozen CH
/// equation with uniform u and fits the log amplitude of the k mode.
DispersionPoint measure_growth_rate(const GridSpec& grid, double k, double c_bar, double u,
                                    const MaterialParams& params, const StepConfig& cfg,
                                    const GrowthOptions& opts = {});

/// Deterministic uniform noise in [-amplitude, amplitude) around c_bar.
ScalarField noisy_field(const GridSpec& grid, double c_bar, double amplitude, std::uint64_t seed);

/// L2 norm of the deviation from the mean.
double perturbation_norm(const ScalarField& c);

/// Frozen-coefficient run at uniform u from noisy c_bar.
ThresholdResult threshold_run(const GridSpec& grid, double u, const MaterialParams& params,
                              const StepConfig& cfg, const SweepOptions& opts);

std::vector<ThresholdResult> spinodal_sweep(const GridSpec& grid, const std::vector<double>& u_values,
                                            const MaterialParams& params, const StepConfig& cfg,
                                            const SweepOptions& opts);

/// Bisection on [u_lo, u_hi] until the bracket is narrower than `tol`.
/// Throws MeasurementError unless u_lo grows and u_hi does not.
ThresholdBracket locate_threshold(const GridSpec& grid, double u_lo, double u_hi, double tol,
                                  const MaterialParams& params, const StepConfig& cfg,
                                  const SweepOptions& opts);

/// Rigid rotation about the domain centre.
VectorField rigid_rotation(const GridSpec& grid, double rate);

/// Frozen run with u = theta + curl(v)^2 for a prescribed steady v.
ThresholdResult frozen_flow_run(const ScalarField& c0, const ScalarField& theta, const VectorField& v,
                                const MaterialParams& params, const StepConfig& cfg, double run_time,
                                double growth_threshold = 10.0);

/// Quiescent and stirred runs from the same noisy c at theta = opts.theta.
/// Needs a Physical grid: on a periodic grid curl v has zero mean.
StirReport curl_suppression_experiment(const GridSpec& grid, const MaterialParams& params,
                                       const StepConfig& cfg, const StirOptions& opts);

/// max over interior cells of |D_t(grad g) - (grad g_dot - (grad v)^T grad g)|
/// with analytic time derivatives and discrete spatial operators.
double lemma1_check(Lemma1Field field, Lemma1Velocity velocity, double t, const GridSpec& grid);

/// Residuals of the Trig / Cellular pair at nx = 32, 64, 128.
OrderRow lemma1_convergence(double t = 0.3);

OperatorOrderReport operator_order_suite();

/// Lemma-1 catalog and convergence, thermodynamic restrictions and operator orders.
CheckReport run_check_suite();

}  // namespace verify
}  // namespace phasesep
