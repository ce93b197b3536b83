#pragma once

#include "phasesep/grid.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace test_support {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline phasesep::GridSpec periodic(int n, double l = kTwoPi)
{
    return phasesep::GridSpec(n, n, l, l, phasesep::BcMode::Periodic);
}

inline phasesep::GridSpec physical(int n, double l = kTwoPi)
{
    return phasesep::GridSpec(n, n, l, l, phasesep::BcMode::Physical);
}

inline phasesep::ScalarField random_field(const phasesep::GridSpec& g, std::uint64_t seed, double lo = -1.0,
                                          double hi = 1.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    phasesep::ScalarField f(g);
    for (double& v : f.values())
        v = dist(rng);
    return f;
}

/// max |a - b| over cells at least `frame` cells away from every wall.
inline double interior_max_diff(const phasesep::ScalarField& a, const phasesep::ScalarField& b, int frame)
{
    const auto& g = a.spec();
    double m = 0.0;
    for (int j = frame; j < g.ny() - frame; ++j)
        for (int i = frame; i < g.nx() - frame; ++i)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

inline double max_diff(const phasesep::ScalarField& a, const phasesep::ScalarField& b)
{
    return interior_max_diff(a, b, 0);
}

}  // namespace test_support
