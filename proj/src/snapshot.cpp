#include "phasesep/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace phasesep {

namespace {

constexpr std::string_view kMagic = "SPINFLD1";

void put_u32(std::string& out, std::uint32_t v)
{
    for (int b = 0; b < 4; ++b)
        out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::string& out, double v)
{
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::string_view take(std::size_t n, const char* what)
    {
        if (bytes_.size() - pos_ < n)
            throw SnapshotError(SnapshotError::Kind::Truncated,
                                std::string("snapshot truncated while reading ") + what + " (offset " +
                                    std::to_string(pos_) + ", need " + std::to_string(n) + " bytes, have " +
                                    std::to_string(bytes_.size() - pos_) + ")");
        const std::string_view s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    std::uint32_t u32(const char* what)
    {
        const std::string_view s = take(4, what);
        std::uint32_t v = 0;
        for (int b = 3; b >= 0; --b)
            v = (v << 8) | static_cast<unsigned char>(s[static_cast<std::size_t>(b)]);
        return v;
    }

    double f64(const char* what)
    {
        const std::string_view s = take(8, what);
        std::uint64_t v = 0;
        for (int b = 7; b >= 0; --b)
            v = (v << 8) | static_cast<unsigned char>(s[static_cast<std::size_t>(b)]);
        return std::bit_cast<double>(v);
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

ScalarField Snapshot::to_field(BcMode bc) const
{
    const GridSpec g(static_cast<int>(header.nx), static_cast<int>(header.ny), header.dx * header.nx,
                     header.dy * header.ny, bc);
    return ScalarField(g, values);
}

std::size_t snapshot_size(std::size_t name_len, std::size_t nx, std::size_t ny)
{
    return kMagic.size() + 4 + 4 + name_len + 4 + 4 + 3 * 8 + nx * ny * 8;
}

std::string encode_snapshot(const ScalarField& field, std::string_view name, double time)
{
    const GridSpec& g = field.spec();
    if (name.size() > std::numeric_limits<std::uint32_t>::max())
        throw SnapshotError(SnapshotError::Kind::DimensionOverflow, "snapshot field name too long");
    std::string out;
    out.reserve(snapshot_size(name.size(), g.size(), 1));
    out.append(kMagic);
    put_u32(out, kSnapshotVersion);
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.append(name);
    put_u32(out, static_cast<std::uint32_t>(g.nx()));
    put_u32(out, static_cast<std::uint32_t>(g.ny()));
    put_f64(out, g.dx());
    put_f64(out, g.dy());
    put_f64(out, time);
    for (double v : field.values())
        put_f64(out, v);
    return out;
}

Snapshot decode_snapshot(std::string_view bytes)
{
    Reader r(bytes);
    if (bytes.size() < kMagic.size())
        throw SnapshotError(SnapshotError::Kind::Truncated, "snapshot truncated inside the magic");
    if (r.take(kMagic.size(), "magic") != kMagic)
        throw SnapshotError(SnapshotError::Kind::BadMagic, "snapshot magic mismatch (expected SPINFLD1)");

    Snapshot s;
    SnapshotHeader& h = s.header;
    h.version = r.u32("version");
    if (h.version != kSnapshotVersion)
        throw SnapshotError(SnapshotError::Kind::BadVersion,
                            "unsupported snapshot version " + std::to_string(h.version));
    const std::uint32_t len = r.u32("name length");
    h.name = std::string(r.take(len, "name"));
    h.nx = r.u32("nx");
    h.ny = r.u32("ny");
    h.dx = r.f64("dx");
    h.dy = r.f64("dy");
    h.time = r.f64("time");

    const std::uint64_t count = static_cast<std::uint64_t>(h.nx) * h.ny;
    if (h.nx == 0 || h.ny == 0 || h.nx > static_cast<std::uint32_t>(std::numeric_limits<int>::max()) ||
        h.ny > static_cast<std::uint32_t>(std::numeric_limits<int>::max()) ||
        count > std::numeric_limits<std::size_t>::max() / 8)
        throw SnapshotError(SnapshotError::Kind::DimensionOverflow,
                            "snapshot dimensions " + std::to_string(h.nx) + "x" + std::to_string(h.ny) +
                                " are out of range");
    if (count * 8 > r.remaining())
        throw SnapshotError(SnapshotError::Kind::Truncated,
                            "snapshot truncated: header declares " + std::to_string(count) + " values, payload holds " +
                                std::to_string(r.remaining() / 8));
    s.values.resize(static_cast<std::size_t>(count));
    for (double& v : s.values)
        v = r.f64("values");
    if (r.remaining() != 0)
        throw SnapshotError(SnapshotError::Kind::TrailingData,
                            std::to_string(r.remaining()) + " unexpected bytes after the snapshot payload");
    return s;
}

void write_snapshot(const ScalarField& field, std::string_view name, double time, const std::string& path)
{
    const std::string bytes = encode_snapshot(field, name, time);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open snapshot '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return decode_snapshot(ss.str());
    } catch (const SnapshotError& e) {
        throw SnapshotError(e.kind(), path + ": " + e.what());
    }
}

std::string snapshot_path(const std::string& prefix, std::string_view field)
{
    return prefix + "_" + std::string(field) + ".bin";
}

void write_state_snapshots(const State& state, const std::string& prefix)
{
    write_snapshot(state.c, "c", state.t, snapshot_path(prefix, "c"));
    write_snapshot(state.v.x, "vx", state.t, snapshot_path(prefix, "vx"));
    write_snapshot(state.v.y, "vy", state.t, snapshot_path(prefix, "vy"));
    write_snapshot(state.p, "p", state.t, snapshot_path(prefix, "p"));
    write_snapshot(state.theta, "theta", state.t, snapshot_path(prefix, "theta"));
}

State read_state_snapshots(const std::string& prefix, BcMode bc)
{
    const Snapshot c = read_snapshot(snapshot_path(prefix, "c"));
    State s = State::uniform(c.to_field(bc).spec(), 0.0, 1.0);
    s.c = c.to_field(bc);
    s.t = c.header.time;
    auto load = [&](std::string_view name) {
        ScalarField f = read_snapshot(snapshot_path(prefix, name)).to_field(bc);
        require_same_grid(f.spec(), s.spec(), "read_state_snapshots");
        return f;
    };
    s.v = VectorField(load("vx"), load("vy"));
    s.p = load("p");
    s.theta = load("theta");
    return s;
}

}  // namespace phasesep
