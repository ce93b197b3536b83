#include "phasesep/config.hpp"

#include "phasesep/snapshot.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace phasesep {

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
{
}

ValidationError::ValidationError(std::string key, const std::string& what)
    : std::runtime_error(key + ": " + what), key_(std::move(key))
{
}

const char* to_string(InitialCondition::Mode mode)
{
    switch (mode) {
    case InitialCondition::Mode::UniformNoise: return "uniform_noise";
    case InitialCondition::Mode::SingleMode: return "single_mode";
    case InitialCondition::Mode::VortexStir: return "vortex_stir";
    case InitialCondition::Mode::FromSnapshot: return "from_snapshot";
    }
    return "?";
}

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Entry {
    std::string value;
    int line;
};

template <class T>
T parse_number(const Entry& e, const std::string& key)
{
    T out{};
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw ParseError(e.line, "cannot parse '" + e.value + "' as a number for key '" + key + "'");
    return out;
}

// Binds known keys to destinations; each binder parses the raw text.
class KeyTable {
public:
    void real(const std::string& key, double& dst)
    {
        add(key, [&dst, key](const Entry& e) { dst = parse_number<double>(e, key); });
    }
    void real_opt(const std::string& key, std::optional<double>& dst)
    {
        add(key, [&dst, key](const Entry& e) { dst = parse_number<double>(e, key); });
    }
    void integer(const std::string& key, int& dst)
    {
        add(key, [&dst, key](const Entry& e) { dst = parse_number<int>(e, key); });
    }
    void integer(const std::string& key, long& dst)
    {
        add(key, [&dst, key](const Entry& e) { dst = parse_number<long>(e, key); });
    }
    void unsigned64(const std::string& key, std::uint64_t& dst)
    {
        add(key, [&dst, key](const Entry& e) { dst = parse_number<std::uint64_t>(e, key); });
    }
    void text(const std::string& key, std::string& dst)
    {
        add(key, [&dst](const Entry& e) { dst = e.value; });
    }

    bool knows_section(const std::string& s) const { return sections_.count(s) > 0; }
    bool knows(const std::string& key) const { return binders_.count(key) > 0; }
    void apply(const std::string& key, const Entry& e) const { binders_.at(key)(e); }

private:
    void add(const std::string& key, std::function<void(const Entry&)> fn)
    {
        sections_[key.substr(0, key.find('.'))] = true;
        binders_[key] = std::move(fn);
    }
    std::map<std::string, std::function<void(const Entry&)>> binders_;
    std::map<std::string, bool> sections_;
};

void require(bool ok, const char* key, const std::string& what)
{
    if (!ok)
        throw ValidationError(key, what);
}

}  // namespace

RunConfig parse_config(const std::string& text)
{
    // Pass 1: collect entries with their lines.
    std::map<std::string, Entry> entries;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(line_no, "unterminated section header '" + line + "'");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section.empty())
                throw ParseError(line_no, "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty())
            throw ParseError(line_no, "missing key before '='");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (section.empty())
            throw ParseError(line_no, "key '" + key + "' appears before any [section]");
        const std::string path = section + "." + key;
        if (auto it = entries.find(path); it != entries.end())
            throw ParseError(line_no, "duplicate key '" + path + "' at lines " + std::to_string(it->second.line) +
                                          " and " + std::to_string(line_no));
        entries.emplace(path, Entry{value, line_no});
    }

    // Pass 2: bind.
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    std::string bc = "periodic";
    std::string mobility = "constant";
    std::string initial_mode = "uniform_noise";
    MaterialParams mat;
    StepConfig step;
    InitialCondition init;
    SourceConfig src;
    RunSettings run;
    VerifySettings ver;

    KeyTable t;
    t.integer("grid.nx", nx);
    t.integer("grid.ny", ny);
    t.real("grid.lx", lx);
    t.real("grid.ly", ly);
    t.text("grid.bc", bc);

    t.real("material.rho0", mat.rho0);
    t.real("material.gamma", mat.gamma);
    t.real("material.theta0", mat.theta0);
    t.text("material.mobility", mobility);
    t.real("material.m0", mat.mobility.m0);
    t.real("material.nu_a", mat.nu_a);
    t.real("material.nu_b", mat.nu_b);
    t.real("material.kappa0", mat.kappa0);
    t.real("material.spec_heat", mat.spec_heat);

    t.real("step.dt", step.dt);
    t.real("step.stabilization_s", step.stabilization_s);
    t.real("step.projection_tol", step.projection_tol);
    t.integer("step.max_linear_iters", step.max_linear_iters);

    t.text("initial.mode", initial_mode);
    t.real("initial.c_mean", init.c_mean);
    t.real("initial.amplitude", init.amplitude);
    t.unsigned64("initial.seed", init.seed);
    t.real_opt("initial.theta", init.theta);
    t.integer("initial.mode_x", init.mode_x);
    t.integer("initial.mode_y", init.mode_y);
    t.real("initial.vortex_amplitude", init.vortex_amplitude);
    t.text("initial.snapshot_prefix", init.snapshot_prefix);

    t.real("sources.body_force_x", src.body_force_x);
    t.real("sources.body_force_y", src.body_force_y);
    t.real("sources.heat_supply", src.heat_supply);

    t.real("run.t_end", run.t_end);
    t.integer("run.snapshot_every", run.snapshot_every);
    t.text("run.output_dir", run.output_dir);

    t.real("verify.u", ver.u);
    t.real("verify.c_bar", ver.c_bar);
    t.real("verify.epsilon", ver.epsilon);
    t.real("verify.t_max", ver.t_max);
    t.real("verify.noise_amplitude", ver.noise_amplitude);
    t.real("verify.run_time", ver.run_time);
    t.real("verify.growth_threshold", ver.growth_threshold);
    t.real("verify.threshold_tol", ver.threshold_tol);
    t.real("verify.stir_rate", ver.stir_rate);
    t.real("verify.theta", ver.theta);
    t.unsigned64("verify.seed", ver.seed);

    for (const auto& [key, entry] : entries) {
        const std::string sec = key.substr(0, key.find('.'));
        if (!t.knows_section(sec))
            throw ParseError(entry.line, "unknown section [" + sec + "]");
        if (!t.knows(key))
            throw ParseError(entry.line, "unknown key '" + key + "'");
        t.apply(key, entry);
    }

    for (const char* k : {"grid.nx", "grid.ny", "grid.lx", "grid.ly"})
        require(entries.count(k) > 0, k, "required key is missing");
    require(nx >= 4, "grid.nx", "must be >= 4");
    require(ny >= 4, "grid.ny", "must be >= 4");
    require(lx > 0.0 && std::isfinite(lx), "grid.lx", "must be positive");
    require(ly > 0.0 && std::isfinite(ly), "grid.ly", "must be positive");
    BcMode mode;
    if (bc == "periodic")
        mode = BcMode::Periodic;
    else if (bc == "physical")
        mode = BcMode::Physical;
    else
        throw ValidationError("grid.bc", "expected 'periodic' or 'physical', got '" + bc + "'");

    if (mobility == "constant")
        mat.mobility.kind = MobilityModel::Kind::Constant;
    else if (mobility == "degenerate")
        mat.mobility.kind = MobilityModel::Kind::Degenerate;
    else
        throw ValidationError("material.mobility", "expected 'constant' or 'degenerate', got '" + mobility + "'");
    require(mat.rho0 > 0.0, "material.rho0", "must be positive");
    require(mat.gamma > 0.0, "material.gamma", "must be positive");
    require(mat.theta0 > 0.0, "material.theta0", "must be positive");
    require(mat.mobility.m0 > 0.0, "material.m0", "must be positive");
    require(mat.nu_a > 0.0, "material.nu_a", "must be positive");
    require(mat.nu_b > 0.0, "material.nu_b", "must be positive");
    require(mat.kappa0 > 0.0, "material.kappa0", "must be positive");
    require(mat.spec_heat > 0.0, "material.spec_heat", "must be positive");

    require(step.dt > 0.0, "step.dt", "must be positive");
    require(step.stabilization_s >= 0.0, "step.stabilization_s", "must be non-negative");
    require(step.projection_tol > 0.0, "step.projection_tol", "must be positive");
    require(step.max_linear_iters > 0, "step.max_linear_iters", "must be positive");

    if (initial_mode == "uniform_noise")
        init.mode = InitialCondition::Mode::UniformNoise;
    else if (initial_mode == "single_mode")
        init.mode = InitialCondition::Mode::SingleMode;
    else if (initial_mode == "vortex_stir")
        init.mode = InitialCondition::Mode::VortexStir;
    else if (initial_mode == "from_snapshot")
        init.mode = InitialCondition::Mode::FromSnapshot;
    else
        throw ValidationError("initial.mode", "unknown mode '" + initial_mode + "'");
    require(init.amplitude >= 0.0, "initial.amplitude", "must be non-negative");
    require(!init.theta || *init.theta > 0.0, "initial.theta", "must be positive");
    require(init.mode_x >= 0, "initial.mode_x", "must be non-negative");
    require(init.mode_y >= 0, "initial.mode_y", "must be non-negative");
    require(init.mode != InitialCondition::Mode::FromSnapshot || !init.snapshot_prefix.empty(),
            "initial.snapshot_prefix", "required when mode = from_snapshot");

    require(run.t_end >= 0.0, "run.t_end", "must be non-negative");
    require(run.snapshot_every >= 0, "run.snapshot_every", "must be non-negative");

    require(ver.u >= 0.0, "verify.u", "must be non-negative");
    require(ver.epsilon > 0.0 && ver.epsilon <= 1e-4, "verify.epsilon", "must lie in (0, 1e-4]");
    require(ver.t_max > 0.0, "verify.t_max", "must be positive");
    require(ver.noise_amplitude > 0.0, "verify.noise_amplitude", "must be positive");
    require(ver.run_time > 0.0, "verify.run_time", "must be positive");
    require(ver.growth_threshold > 1.0, "verify.growth_threshold", "must exceed 1");
    require(ver.threshold_tol > 0.0, "verify.threshold_tol", "must be positive");
    require(ver.stir_rate >= 0.0, "verify.stir_rate", "must be non-negative");
    require(ver.theta > 0.0, "verify.theta", "must be positive");

    return RunConfig{GridSpec(nx, ny, lx, ly, mode), mat, step, init, src, run, ver};
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    RunConfig cfg = parse_config(ss.str());
    if (cfg.initial.mode == InitialCondition::Mode::FromSnapshot) {
        std::filesystem::path prefix(cfg.initial.snapshot_prefix);
        if (prefix.is_relative())
            prefix = std::filesystem::path(path).parent_path() / prefix;
        cfg.initial.snapshot_prefix = prefix.string();
        for (const char* f : kStateFields)
            if (!std::filesystem::exists(snapshot_path(cfg.initial.snapshot_prefix, f)))
                throw ValidationError("initial.snapshot_prefix",
                                      "missing file '" + snapshot_path(cfg.initial.snapshot_prefix, f) + "'");
    }
    return cfg;
}

State initial_state(const RunConfig& cfg)
{
    const GridSpec& g = cfg.grid;
    const InitialCondition& ic = cfg.initial;
    const double theta = ic.theta.value_or(cfg.material.theta0);
    constexpr double two_pi = 2.0 * std::numbers::pi;

    if (ic.mode == InitialCondition::Mode::FromSnapshot) {
        State s = read_state_snapshots(ic.snapshot_prefix, g.bc());
        if (!(s.spec() == g))
            throw ValidationError("initial.snapshot_prefix", "snapshot grid differs from [grid]");
        return s;
    }

    State s = State::uniform(g, ic.c_mean, theta);
    if (ic.mode == InitialCondition::Mode::SingleMode) {
        const double kx = two_pi * ic.mode_x / g.lx(), ky = two_pi * ic.mode_y / g.ly();
        s.c = ScalarField::from_function(
            g, [&](double x, double y) { return ic.c_mean + ic.amplitude * std::cos(kx * x) * std::cos(ky * y); });
        return s;
    }

    s.c = verify::noisy_field(g, ic.c_mean, ic.amplitude, ic.seed);
    if (ic.mode == InitialCondition::Mode::VortexStir) {
        // Cellular flow from the stream function A sin(a x) sin(b y), projected
        // so that it is discretely divergence-free.
        const double a = two_pi / g.lx(), b = two_pi / g.ly();
        const double amp = ic.vortex_amplitude;
        const VectorField v(
            ScalarField::from_function(g, [&](double x, double y) { return amp * std::sin(a * x) * std::cos(b * y); }),
            ScalarField::from_function(g, [&](double x, double y) {
                return -amp * (a / b) * std::cos(a * x) * std::sin(b * y);
            }));
        const dynamics::Integrator integ(g, cfg.material, cfg.step);
        s.v = integ.project(v).v;
    }
    return s;
}

SourceTerms make_sources(const RunConfig& cfg)
{
    SourceTerms src;
    const SourceConfig& s = cfg.sources;
    if (s.body_force_x != 0.0 || s.body_force_y != 0.0)
        src.b = VectorField(ScalarField(cfg.grid, s.body_force_x), ScalarField(cfg.grid, s.body_force_y));
    if (s.heat_supply != 0.0)
        src.r = ScalarField(cfg.grid, s.heat_supply);
    return src;
}

SweepOptions sweep_options(const VerifySettings& v)
{
    return SweepOptions{v.c_bar, v.noise_amplitude, v.run_time, v.growth_threshold, v.seed};
}

GrowthOptions growth_options(const VerifySettings& v)
{
    GrowthOptions o;
    o.epsilon = v.epsilon;
    o.t_max = v.t_max;
    return o;
}

StirOptions stir_options(const VerifySettings& v)
{
    return StirOptions{v.theta, v.stir_rate, v.noise_amplitude, v.run_time, v.seed};
}

}  // namespace phasesep
