#pragma once

#include "phasesep/thermo.hpp"

#include <fstream>
#include <string>

namespace phasesep {

inline constexpr const char* kDiagnosticsHeader =
    "step,time,mass_diff,kinetic,internal,free_energy,entropy,viscous_diss,chemical_diss,thermal_diss,"
    "cd_residual,power_residual,energy_budget_residual,theta_floor_hits";

/// One CSV row, reals with 17 significant digits, no trailing newline.
std::string format_diagnostics_row(const AuditReport& report);

/// Appends a row to `path`, writing the header first if the file is empty.
void write_diagnostics_row(const AuditReport& report, const std::string& path);

/// Keeps the file open across a run. Truncates on construction.
class DiagnosticsWriter {
public:
    explicit DiagnosticsWriter(const std::string& path);
    void write(const AuditReport& report);

private:
    std::string path_;
    std::ofstream out_;
};

}  // namespace phasesep
