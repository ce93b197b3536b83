#include "phasesep/diagnostics_csv.hpp"

#include "phasesep/snapshot.hpp"

#include <cstdio>
#include <filesystem>

namespace phasesep {

namespace {

void append_real(std::string& out, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += ',';
    out += buf;
}

}  // namespace

std::string format_diagnostics_row(const AuditReport& r)
{
    std::string out = std::to_string(r.step);
    append_real(out, r.time);
    append_real(out, r.energy.mass_diff);
    append_real(out, r.energy.kinetic);
    append_real(out, r.energy.internal);
    append_real(out, r.energy.free_energy);
    append_real(out, r.energy.entropy);
    append_real(out, r.dissipation.viscous);
    append_real(out, r.dissipation.chemical);
    append_real(out, r.dissipation.thermal);
    append_real(out, r.cd_residual);
    append_real(out, r.power_identity_residual);
    append_real(out, r.energy_budget_residual);
    out += ',' + std::to_string(r.theta_floor_hits);
    return out;
}

void write_diagnostics_row(const AuditReport& report, const std::string& path)
{
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
    std::ofstream out(path, std::ios::app);
    if (!out)
        throw IoError("cannot open '" + path + "' for appending");
    if (fresh)
        out << kDiagnosticsHeader << '\n';
    out << format_diagnostics_row(report) << '\n';
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& path) : path_(path), out_(path, std::ios::trunc)
{
    if (!out_)
        throw IoError("cannot open '" + path + "' for writing");
    out_ << kDiagnosticsHeader << '\n';
}

void DiagnosticsWriter::write(const AuditReport& report)
{
    out_ << format_diagnostics_row(report) << '\n';
    out_.flush();
    if (!out_)
        throw IoError("write failed for '" + path_ + "'");
}

}  // namespace phasesep
