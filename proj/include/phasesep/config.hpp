#pragma once

// Run configuration: line-based `key = value` text with `[section]` headers
// and `#` comments. Only the [grid] block is required.

#include "phasesep/dynamics.hpp"
#include "phasesep/verify.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace phasesep {

/// Malformed text; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

/// Well-formed text with an invalid value; carries the key path, e.g.
/// "material.theta0".
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string key, const std::string& what);
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct InitialCondition {
    enum class Mode { UniformNoise, SingleMode, VortexStir, FromSnapshot };
    Mode mode = Mode::UniformNoise;
    double c_mean = 0.0;
    double amplitude = 1e-3;
    std::uint64_t seed = 1;
    std::optional<double> theta;   ///< defaults to material.theta0
    int mode_x = 1;
    int mode_y = 0;
    double vortex_amplitude = 0.1;
    std::string snapshot_prefix;
};

struct SourceConfig {
    double body_force_x = 0.0;
    double body_force_y = 0.0;
    double heat_supply = 0.0;
};

struct RunSettings {
    double t_end = 1.0;
    long snapshot_every = 0;
    std::string output_dir = "out";
};

/// Inputs for the dispersion, spinodal and stir subcommands.
struct VerifySettings {
    double u = 0.0;
    double c_bar = 0.0;
    double epsilon = 1e-5;
    double t_max = 50.0;
    double noise_amplitude = 1e-3;
    double run_time = 100.0;
    double growth_threshold = 10.0;
    double threshold_tol = 0.05;
    double stir_rate = 0.4;
    double theta = 0.5;
    std::uint64_t seed = 1;
};

struct RunConfig {
    GridSpec grid;
    MaterialParams material;
    StepConfig step;
    InitialCondition initial;
    SourceConfig sources;
    RunSettings run;
    VerifySettings verify;
};

const char* to_string(InitialCondition::Mode mode);

/// Parses and validates. Unknown sections or keys and duplicate keys are
/// ParseErrors; out-of-range values are ValidationErrors.
RunConfig parse_config(const std::string& text);

/// Reads `path` (IoError on failure) and checks referenced snapshot files.
RunConfig load_config(const std::string& path);

/// Builds the initial state described by `cfg.initial`.
State initial_state(const RunConfig& cfg);

SourceTerms make_sources(const RunConfig& cfg);

SweepOptions sweep_options(const VerifySettings& v);
GrowthOptions growth_options(const VerifySettings& v);
StirOptions stir_options(const VerifySettings& v);

}  // namespace phasesep
