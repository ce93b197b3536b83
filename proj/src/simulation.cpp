#include "phasesep/simulation.hpp"

#include <cmath>
#include <stdexcept>

namespace phasesep {

long steps_for(double t_end, double dt)
{
    if (!(dt > 0.0) || !(t_end >= 0.0))
        throw std::invalid_argument("steps_for: need dt > 0 and t_end >= 0");
    return static_cast<long>(std::ceil(t_end / dt - 1e-9));
}

RunSummary run(State initial, const SourceTerms& src, const MaterialParams& params, const StepConfig& cfg,
               double t_end, long snapshot_every, const RunObserver& observer)
{
    params.validate();
    cfg.validate();
    initial.validate();

    const long n_steps = steps_for(t_end, cfg.dt);
    const double reference_mass = thermo::mass_diff(initial.c, params);
    dynamics::Integrator integ(initial.spec(), params, cfg);

    RunSummary out{std::move(initial), {}, 0, 0};
    out.last_report = thermo::initial_report(out.final_state, params);
    if (observer)
        observer(out.final_state, out.last_report, snapshot_every > 0);

    for (long n = 1; n <= n_steps; ++n) {
        dynamics::StepOutput step = integ.coupled_step(out.final_state, src);
        AuditReport rep = thermo::audit_step(out.final_state, step.state, step.chem, src, params, cfg,
                                             reference_mass, step.theta_floor_hits);
        rep.step = n;
        out.final_state = std::move(step.state);
        out.last_report = rep;
        out.steps = n;
        out.theta_floor_hits += step.theta_floor_hits;
        if (observer) {
            const bool due = snapshot_every > 0 && (n % snapshot_every == 0 || n == n_steps);
            observer(out.final_state, rep, due);
        }
    }
    return out;
}

}  // namespace phasesep
