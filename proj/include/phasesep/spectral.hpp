#pragma once

// FFT-backed operators. PeriodicSpectral serves Periodic grids;
// CosineSpectral diagonalises the mirror-ghost operators of Physical grids.
// Each instance owns FFTW plans and scratch buffers, so an instance must not
// be shared between threads.

#include "phasesep/grid.hpp"

#include <complex>
#include <functional>
#include <memory>

namespace phasesep {

class PeriodicSpectral {
public:
    explicit PeriodicSpectral(const GridSpec& spec);
    ~PeriodicSpectral();
    PeriodicSpectral(PeriodicSpectral&&) noexcept;
    PeriodicSpectral& operator=(PeriodicSpectral&&) noexcept;
    PeriodicSpectral(const PeriodicSpectral&) = delete;
    PeriodicSpectral& operator=(const PeriodicSpectral&) = delete;

    const GridSpec& spec() const;

    /// Eigenvalue of the 5-point Laplacian for mode (mx, my).
    double laplacian_symbol(int mx, int my) const;

    /// Multiplies every Fourier mode of `f` by `multiplier(lambda)`, where
    /// lambda is the 5-point Laplacian eigenvalue of that mode.
    ScalarField apply_symbol(const ScalarField& f, const std::function<double(double)>& multiplier) const;

    struct Projection {
        VectorField v;     ///< discretely divergence-free part
        ScalarField phi;   ///< zero-mean potential, v_in = v + grad(phi) + removed modes
    };

    /// Helmholtz projection against the central-difference divergence. Modes
    /// invisible to the central stencil (Nyquist in either direction, except
    /// the mean) are removed.
    Projection project(const VectorField& v) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// DCT-II basis cos(pi m (i + 1/2) / n). With even ghosts it is the exact
/// eigenbasis of the 5-point Laplacian and of divergence(gradient(.)).
class CosineSpectral {
public:
    explicit CosineSpectral(const GridSpec& spec);
    ~CosineSpectral();
    CosineSpectral(CosineSpectral&&) noexcept;
    CosineSpectral& operator=(CosineSpectral&&) noexcept;
    CosineSpectral(const CosineSpectral&) = delete;
    CosineSpectral& operator=(const CosineSpectral&) = delete;

    const GridSpec& spec() const;

    /// Eigenvalue of laplacian() for mode (mx, my).
    double laplacian_symbol(int mx, int my) const;
    /// Eigenvalue of divergence(gradient(.)) for mode (mx, my).
    double central_symbol(int mx, int my) const;

    /// Multiplies mode (mx, my) by `multiplier(mx, my)`.
    ScalarField apply(const ScalarField& f, const std::function<double(int, int)>& multiplier) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace phasesep
