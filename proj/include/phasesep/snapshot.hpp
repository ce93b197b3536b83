#pragma once

// Binary field snapshots. Layout, all little-endian:
//   "SPINFLD1" | u32 version | u32 len | name | u32 nx | u32 ny |
//   f64 dx | f64 dy | f64 time | nx*ny f64 values (row-major, i fastest)

#include "phasesep/dynamics.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phasesep {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SnapshotError : public IoError {
public:
    enum class Kind { BadMagic, BadVersion, Truncated, DimensionOverflow, TrailingData };
    SnapshotError(Kind kind, const std::string& what) : IoError(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotHeader {
    std::uint32_t version = kSnapshotVersion;
    std::string name;
    std::uint32_t nx = 0;
    std::uint32_t ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    double time = 0.0;
};

struct Snapshot {
    SnapshotHeader header;
    std::vector<double> values;

    /// Field on a grid of nx*dx by ny*dy with the given boundary mode.
    ScalarField to_field(BcMode bc) const;
};

/// Encoded size for a field name of `name_len` bytes.
std::size_t snapshot_size(std::size_t name_len, std::size_t nx, std::size_t ny);

std::string encode_snapshot(const ScalarField& field, std::string_view name, double time);
Snapshot decode_snapshot(std::string_view bytes);

void write_snapshot(const ScalarField& field, std::string_view name, double time, const std::string& path);
Snapshot read_snapshot(const std::string& path);

inline constexpr const char* kStateFields[] = {"c", "vx", "vy", "p", "theta"};

/// `<prefix>_<field>.bin` for each of kStateFields.
std::string snapshot_path(const std::string& prefix, std::string_view field);
void write_state_snapshots(const State& state, const std::string& prefix);
State read_state_snapshots(const std::string& prefix, BcMode bc);

}  // namespace phasesep
