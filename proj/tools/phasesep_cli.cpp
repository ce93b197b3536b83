// phasesep: coupled phase-separation simulator and verification driver.
//
// Exit codes: 0 ok, 1 parse / validation, 2 numerical failure, 3 I/O.
// Failures print one JSON object on stderr, e.g.
//   {"error":"validation","key":"material.theta0","message":"..."}

#include "phasesep/config.hpp"
#include "phasesep/diagnostics_csv.hpp"
#include "phasesep/simulation.hpp"
#include "phasesep/snapshot.hpp"
#include "phasesep/thermo.hpp"
#include "phasesep/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <set>
#include <string>
#include <vector>

using namespace phasesep;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

std::string real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int fail(int code, json err)
{
    std::cerr << err.dump() << std::endl;
    return code;
}

std::vector<double> linspace(double lo, double hi, int n)
{
    if (n == 1)
        return {lo};
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

int cmd_simulate(const std::string& config_path, const std::string& out_override)
{
    RunConfig cfg = load_config(config_path);
    if (!out_override.empty())
        cfg.run.output_dir = out_override;
    const std::filesystem::path out(cfg.run.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec)
        throw IoError("cannot create output directory '" + out.string() + "': " + ec.message());

    DiagnosticsWriter diag((out / "diagnostics.csv").string());
    const State init = initial_state(cfg);
    const RunSummary summary =
        run(init, make_sources(cfg), cfg.material, cfg.step, cfg.run.t_end, cfg.run.snapshot_every,
            [&](const State& s, const AuditReport& rep, bool snapshot_due) {
                diag.write(rep);
                if (snapshot_due) {
                    char name[32];
                    std::snprintf(name, sizeof name, "snap_%06ld", rep.step);
                    write_state_snapshots(s, (out / name).string());
                }
            });
    write_state_snapshots(summary.final_state, (out / "final").string());

    if (summary.theta_floor_hits > 0)
        std::cerr << json{{"warning", "theta_floor"}, {"hits", summary.theta_floor_hits}}.dump() << std::endl;
    std::cout << "steps " << summary.steps << "\n"
              << "time " << real(summary.final_state.t) << "\n"
              << "mass_drift " << real(summary.last_report.mass_drift) << "\n"
              << "theta_floor_hits " << summary.theta_floor_hits << "\n"
              << "output " << out.string() << "\n";
    return kExitOk;
}

int cmd_dispersion(const std::string& config_path, double kmin, double kmax, int nk)
{
    const RunConfig cfg = load_config(config_path);
    if (!(kmin > 0.0) || !(kmax >= kmin))
        throw ValidationError("--kmin/--kmax", "need 0 < kmin <= kmax");
    // Only wavenumbers 2 pi m / lx fit the periodic box; snap and deduplicate.
    const double k1 = 2.0 * std::numbers::pi / cfg.grid.lx();
    std::set<long> modes;
    for (double k : linspace(kmin, kmax, nk))
        modes.insert(std::max(1L, std::lround(k / k1)));

    std::cout << "k,mode,sigma_predicted,sigma_measured,rel_error,fit_samples,status\n";
    for (long m : modes) {
        const double k = k1 * static_cast<double>(m);
        try {
            const DispersionPoint p = verify::measure_growth_rate(cfg.grid, k, cfg.verify.c_bar, cfg.verify.u,
                                                                  cfg.material, cfg.step,
                                                                  growth_options(cfg.verify));
            std::cout << real(k) << ',' << m << ',' << real(p.sigma_predicted) << ',' << real(p.sigma_measured)
                      << ',' << real(p.rel_error) << ',' << p.fit_samples << ",ok\n";
        } catch (const MeasurementError&) {
            const double pred = verify::predicted_growth_rate(k, cfg.verify.c_bar, cfg.verify.u, cfg.material);
            std::cout << real(k) << ',' << m << ',' << real(pred) << ",nan,nan,0,no_fit\n";
        }
    }
    return kExitOk;
}

int cmd_spinodal(const std::string& config_path, double umin, double umax, int n)
{
    const RunConfig cfg = load_config(config_path);
    if (!(umax > umin) || umin < 0.0)
        throw ValidationError("--umin/--umax", "need 0 <= umin < umax");
    const SweepOptions opts = sweep_options(cfg.verify);
    const std::vector<double> us = linspace(umin, umax, n);
    const auto runs = verify::spinodal_sweep(cfg.grid, us, cfg.material, cfg.step, opts);

    std::cout << "u,grew,amplitude_ratio\n";
    for (const ThresholdResult& r : runs)
        std::cout << real(r.u) << ',' << (r.grew ? 1 : 0) << ',' << real(r.amplitude_ratio) << '\n';

    // Refine the first grow -> no-grow transition of the sweep.
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        if (runs[i].grew && !runs[i + 1].grew) {
            const ThresholdBracket b = verify::locate_threshold(cfg.grid, runs[i].u, runs[i + 1].u,
                                                                cfg.verify.threshold_tol, cfg.material, cfg.step,
                                                                opts);
            std::cout << "threshold_lower " << real(b.lower) << "\n"
                      << "threshold_upper " << real(b.upper) << "\n"
                      << "threshold_estimate " << real(b.estimate) << "\n"
                      << "theta0 " << real(cfg.material.theta0) << "\n";
            return kExitOk;
        }
    }
    std::cout << "threshold_estimate none\n";
    return kExitOk;
}

int cmd_stir(const std::string& config_path)
{
    const RunConfig cfg = load_config(config_path);
    const StirReport r = verify::curl_suppression_experiment(cfg.grid, cfg.material, cfg.step,
                                                             stir_options(cfg.verify));
    std::cout << "theta " << real(cfg.verify.theta) << "\n"
              << "required_omega_sq " << real(r.required_omega_sq) << "\n"
              << "min_omega_sq " << real(r.min_omega_sq) << "\n"
              << "quiescent_ratio " << real(r.quiescent.amplitude_ratio) << "\n"
              << "quiescent_grew " << (r.quiescent.grew ? 1 : 0) << "\n"
              << "stirred_ratio " << real(r.stirred.amplitude_ratio) << "\n"
              << "stirred_grew " << (r.stirred.grew ? 1 : 0) << "\n";
    return kExitOk;
}

int cmd_audit(const std::string& prefix, const std::string& config_path, const std::string& bc)
{
    MaterialParams params;
    BcMode mode = bc == "physical" ? BcMode::Physical : BcMode::Periodic;
    if (!config_path.empty()) {
        const RunConfig cfg = load_config(config_path);
        params = cfg.material;
        mode = cfg.grid.bc();
    }
    const State s = read_state_snapshots(prefix, mode);
    s.validate();
    const EnergyReport e = thermo::energy_report(s, params);
    std::cout << "time,mass_diff,kinetic,internal,free_energy,entropy\n"
              << real(s.t) << ',' << real(e.mass_diff) << ',' << real(e.kinetic) << ',' << real(e.internal) << ','
              << real(e.free_energy) << ',' << real(e.entropy) << '\n';
    return kExitOk;
}

int cmd_check()
{
    const CheckReport rep = verify::run_check_suite();
    for (const CheckLine& l : rep.lines)
        std::cout << (l.pass ? "PASS " : "FAIL ") << l.name << " value=" << real(l.value)
                  << " threshold=" << real(l.threshold) << '\n';
    return rep.all_pass() ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coupled Cahn-Hilliard / Navier-Stokes / heat simulator with thermodynamic audit"};
    app.require_subcommand(1);

    std::string config, out, prefix, bc = "periodic";
    double kmin = 0.0, kmax = 0.0, umin = 0.0, umax = 0.0;
    int nk = 0, nu = 0;

    auto* sim = app.add_subcommand("simulate", "Full coupled run");
    sim->add_option("--config", config, "Config file")->required();
    sim->add_option("--out", out, "Output directory (overrides run.output_dir)");

    auto* disp = app.add_subcommand("dispersion", "Measured against predicted linear growth rates");
    disp->add_option("--config", config, "Config file")->required();
    disp->add_option("--kmin", kmin)->required();
    disp->add_option("--kmax", kmax)->required();
    disp->add_option("--nk", nk)->required()->check(CLI::PositiveNumber);

    auto* spin = app.add_subcommand("spinodal", "Growth sweep over u with bisection of the transition");
    spin->add_option("--config", config, "Config file")->required();
    spin->add_option("--umin", umin)->required();
    spin->add_option("--umax", umax)->required();
    spin->add_option("--n", nu)->required()->check(CLI::Range(2, 100000));

    auto* stir = app.add_subcommand("stir", "Curl-suppression experiment");
    stir->add_option("--config", config, "Config file")->required();

    auto* audit = app.add_subcommand("audit", "Energy report of a saved state");
    audit->add_option("--snapshot-prefix", prefix, "Prefix of the <prefix>_<field>.bin files")->required();
    audit->add_option("--config", config, "Config supplying material parameters and boundary mode");
    audit->add_option("--bc", bc, "Boundary mode without a config")->check(CLI::IsMember({"periodic", "physical"}));

    auto* check = app.add_subcommand("check", "Self-contained identity, restriction and operator-order checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kExitInput, {{"error", "usage"}, {"message", e.what()}});
    }

    try {
        if (*sim)
            return cmd_simulate(config, out);
        if (*disp)
            return cmd_dispersion(config, kmin, kmax, nk);
        if (*spin)
            return cmd_spinodal(config, umin, umax, nu);
        if (*stir)
            return cmd_stir(config);
        if (*audit)
            return cmd_audit(prefix, config, bc);
        if (*check)
            return cmd_check();
    } catch (const ParseError& e) {
        return fail(kExitInput, {{"error", "parse"}, {"line", e.line()}, {"message", e.what()}});
    } catch (const ValidationError& e) {
        return fail(kExitInput, {{"error", "validation"}, {"key", e.key()}, {"message", e.what()}});
    } catch (const IoError& e) {
        return fail(kExitIo, {{"error", "io"}, {"message", e.what()}});
    } catch (const SolverError& e) {
        return fail(kExitNumerical, {{"error", "numerical"},
                                     {"stage", e.stage()},
                                     {"iterations", e.iterations()},
                                     {"message", e.what()}});
    } catch (const MeasurementError& e) {
        return fail(kExitNumerical, {{"error", "measurement"}, {"message", e.what()}});
    } catch (const std::invalid_argument& e) {
        return fail(kExitInput, {{"error", "invalid_argument"}, {"message", e.what()}});
    } catch (const std::exception& e) {
        return fail(kExitNumerical, {{"error", "internal"}, {"message", e.what()}});
    }
    return kExitInput;
}
