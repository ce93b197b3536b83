#pragma once

// Fixed-step driver that advances a State and audits every step.

#include "phasesep/dynamics.hpp"
#include "phasesep/thermo.hpp"

#include <functional>

namespace phasesep {

struct RunSummary {
    State final_state;
    AuditReport last_report;
    long steps = 0;
    long theta_floor_hits = 0;
};

/// Called for step 0 (the initial state) and after every step.
/// `snapshot_due` is true on multiples of `snapshot_every` and on the last step.
using RunObserver = std::function<void(const State& state, const AuditReport& report, bool snapshot_due)>;

/// Number of fixed steps needed to reach t_end with step dt.
long steps_for(double t_end, double dt);

RunSummary run(State initial, const SourceTerms& src, const MaterialParams& params, const StepConfig& cfg,
               double t_end, long snapshot_every, const RunObserver& observer = {});

}  // namespace phasesep
