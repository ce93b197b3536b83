#include "phasesep/diagnostics_csv.hpp"
#include "phasesep/snapshot.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace phasesep;
using namespace test_support;

namespace {

std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("phasesep_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

SnapshotError::Kind decode_kind(const std::string& bytes)
{
    try {
        decode_snapshot(bytes);
    } catch (const SnapshotError& e) {
        return e.kind();
    }
    FAIL("expected a SnapshotError");
    return SnapshotError::Kind::BadMagic;
}

}  // namespace

TEST_CASE("round trip is bitwise in both boundary modes")
{
    for (BcMode bc : {BcMode::Periodic, BcMode::Physical}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const GridSpec g(8 + static_cast<int>(seed), 5 + static_cast<int>(seed % 3), 1.5, 0.7, bc);
            ScalarField f = random_field(g, seed, -1e3, 1e3);
            f[0] = -0.0;
            f[1] = 1e-310;
            const Snapshot s = decode_snapshot(encode_snapshot(f, "c", 0.125 * seed));
            CHECK(s.header.name == "c");
            CHECK(s.header.time == 0.125 * seed);
            const ScalarField back = s.to_field(bc);
            CHECK(back.spec() == g);
            CHECK(std::memcmp(back.values().data(), f.values().data(), f.size() * sizeof(double)) == 0);
        }
    }
}

TEST_CASE("encoded size follows the layout")
{
    const GridSpec g(64, 64, 1.0, 1.0);
    const std::string bytes = encode_snapshot(ScalarField(g), "theta", 0.0);
    const std::size_t expect = 8 + 4 + 4 + 5 + 4 + 4 + 24 + 64 * 64 * 8;
    CHECK(bytes.size() == expect);
    CHECK(snapshot_size(5, 64, 64) == expect);
    CHECK(bytes.substr(0, 8) == "SPINFLD1");
    // Little-endian version word.
    CHECK(bytes[8] == 1);
    CHECK(bytes[9] == 0);
}

TEST_CASE("malformed snapshots are rejected")
{
    const GridSpec g(6, 4, 1.0, 1.0);
    const std::string good = encode_snapshot(random_field(g, 2), "vx", 3.0);

    std::string bad = good;
    bad[0] = 'X';
    CHECK(decode_kind(bad) == SnapshotError::Kind::BadMagic);

    bad = good;
    bad[8] = 2;
    CHECK(decode_kind(bad) == SnapshotError::Kind::BadVersion);

    CHECK(decode_kind(good.substr(0, good.size() - 1)) == SnapshotError::Kind::Truncated);
    CHECK(decode_kind(good.substr(0, 20)) == SnapshotError::Kind::Truncated);
    CHECK(decode_kind(good.substr(0, 3)) == SnapshotError::Kind::Truncated);
    CHECK(decode_kind(good + "x") == SnapshotError::Kind::TrailingData);

    // nx = 0xffffffff cannot describe a field.
    bad = good;
    const std::size_t nx_at = 8 + 4 + 4 + 2;
    for (int b = 0; b < 4; ++b)
        bad[nx_at + static_cast<std::size_t>(b)] = static_cast<char>(0xff);
    CHECK(decode_kind(bad) == SnapshotError::Kind::DimensionOverflow);
}

TEST_CASE("files and state snapshots")
{
    const auto dir = scratch_dir("snap");
    const GridSpec g(12, 10, 2.0, 1.0, BcMode::Physical);
    State s = State::uniform(g, 0.0, 0.9);
    s.c = random_field(g, 1);
    s.v = VectorField(random_field(g, 2), random_field(g, 3));
    s.p = random_field(g, 4);
    s.theta = random_field(g, 5, 0.5, 1.5);
    s.t = 0.75;
    const std::string prefix = (dir / "snap_000010").string();
    write_state_snapshots(s, prefix);
    for (const char* f : kStateFields)
        CHECK(std::filesystem::exists(snapshot_path(prefix, f)));
    CHECK(snapshot_path("out/a", "c") == "out/a_c.bin");

    const State back = read_state_snapshots(prefix, BcMode::Physical);
    CHECK(back.c.values() == s.c.values());
    CHECK(back.v.x.values() == s.v.x.values());
    CHECK(back.v.y.values() == s.v.y.values());
    CHECK(back.p.values() == s.p.values());
    CHECK(back.theta.values() == s.theta.values());
    CHECK(back.t == 0.75);
    CHECK(back.spec() == g);

    CHECK_THROWS_AS(read_snapshot((dir / "missing.bin").string()), IoError);
    std::ofstream((dir / "short.bin").string(), std::ios::binary) << "SPINFLD1";
    CHECK_THROWS_AS(read_snapshot((dir / "short.bin").string()), SnapshotError);
    CHECK_THROWS_AS(write_snapshot(s.c, "c", 0.0, (dir / "no_such_dir" / "x.bin").string()), IoError);
}

TEST_CASE("diagnostics rows")
{
    AuditReport r;
    r.step = 7;
    r.time = 0.1;
    r.energy.kinetic = 1.0 / 3.0;
    r.cd_residual = -2.5e-9;
    r.theta_floor_hits = 2;
    const std::string row = format_diagnostics_row(r);
    CHECK(row.rfind("7,0.10000000000000001,", 0) == 0);
    CHECK(row.find("0.33333333333333331") != std::string::npos);
    CHECK(row.find("-2.5000000000000001e-09") != std::string::npos);
    CHECK(row.substr(row.size() - 2) == ",2");

    // One column per header field.
    const auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
    CHECK(count(row) == count(kDiagnosticsHeader));

    const auto dir = scratch_dir("diag");
    const std::string path = (dir / "d.csv").string();
    write_diagnostics_row(r, path);
    write_diagnostics_row(r, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == std::string(kDiagnosticsHeader) + "\n" + row + "\n" + row + "\n");

    {
        DiagnosticsWriter w(path);
        w.write(r);
    }
    std::ifstream in2(path);
    std::stringstream ss2;
    ss2 << in2.rdbuf();
    CHECK(ss2.str() == std::string(kDiagnosticsHeader) + "\n" + row + "\n");
    CHECK_THROWS_AS(DiagnosticsWriter((dir / "nope" / "d.csv").string()), IoError);
}
