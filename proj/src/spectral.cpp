#include "phasesep/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace phasesep {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

}  // namespace

// Per-direction squared symbol tables.
std::vector<double> symbol_table(int n, double h, double angle_per_mode, double scale)
{
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        const double s = scale * std::sin(angle_per_mode * m) / h;
        t[static_cast<std::size_t>(m)] = s * s;
    }
    return t;
}

struct PeriodicSpectral::Impl {
    GridSpec spec;
    int nkx;
    std::vector<double> lap_x, lap_y;
    double* real_buf = nullptr;
    fftw_complex* spec_a = nullptr;
    fftw_complex* spec_b = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    explicit Impl(const GridSpec& g)
        : spec(g), nkx(g.nx() / 2 + 1),
          lap_x(symbol_table(g.nx(), g.dx(), std::numbers::pi / g.nx(), 2.0)),
          lap_y(symbol_table(g.ny(), g.dy(), std::numbers::pi / g.ny(), 2.0))
    {
        if (g.bc() != BcMode::Periodic)
            throw std::invalid_argument("PeriodicSpectral requires a periodic grid");
        const std::size_t nreal = g.size();
        const std::size_t ncplx = static_cast<std::size_t>(nkx) * static_cast<std::size_t>(g.ny());
        real_buf = fftw_alloc_real(nreal);
        spec_a = fftw_alloc_complex(ncplx);
        spec_b = fftw_alloc_complex(ncplx);
        std::lock_guard<std::mutex> lock(planner_mutex());
        forward = fftw_plan_dft_r2c_2d(g.ny(), g.nx(), real_buf, spec_a, FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_2d(g.ny(), g.nx(), spec_a, real_buf, FFTW_ESTIMATE);
    }

    ~Impl()
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(real_buf);
        fftw_free(spec_a);
        fftw_free(spec_b);
    }

    std::size_t k_index(int kx, int ky) const
    {
        return static_cast<std::size_t>(kx) + static_cast<std::size_t>(nkx) * static_cast<std::size_t>(ky);
    }

    void to_spectral(const ScalarField& f, fftw_complex* out)
    {
        std::copy(f.values().begin(), f.values().end(), real_buf);
        fftw_execute_dft_r2c(forward, real_buf, out);
    }

    // Destroys `in`.
    ScalarField from_spectral(fftw_complex* in)
    {
        fftw_execute_dft_c2r(backward, in, real_buf);
        ScalarField f(spec);
        const double norm = 1.0 / static_cast<double>(spec.size());
        for (std::size_t k = 0; k < spec.size(); ++k)
            f[k] = real_buf[k] * norm;
        return f;
    }
};

PeriodicSpectral::PeriodicSpectral(const GridSpec& spec) : impl_(std::make_unique<Impl>(spec)) {}
PeriodicSpectral::~PeriodicSpectral() = default;
PeriodicSpectral::PeriodicSpectral(PeriodicSpectral&&) noexcept = default;
PeriodicSpectral& PeriodicSpectral::operator=(PeriodicSpectral&&) noexcept = default;

const GridSpec& PeriodicSpectral::spec() const { return impl_->spec; }

double PeriodicSpectral::laplacian_symbol(int mx, int my) const
{
    const GridSpec& g = impl_->spec;
    mx = ((mx % g.nx()) + g.nx()) % g.nx();
    my = ((my % g.ny()) + g.ny()) % g.ny();
    return -(impl_->lap_x[static_cast<std::size_t>(mx)] + impl_->lap_y[static_cast<std::size_t>(my)]);
}

ScalarField PeriodicSpectral::apply_symbol(const ScalarField& f,
                                           const std::function<double(double)>& multiplier) const
{
    require_same_grid(f.spec(), impl_->spec, "PeriodicSpectral::apply_symbol");
    Impl& m = *impl_;
    m.to_spectral(f, m.spec_a);
    for (int ky = 0; ky < m.spec.ny(); ++ky) {
        for (int kx = 0; kx < m.nkx; ++kx) {
            const double factor = multiplier(laplacian_symbol(kx, ky));
            fftw_complex& z = m.spec_a[m.k_index(kx, ky)];
            z[0] *= factor;
            z[1] *= factor;
        }
    }
    return m.from_spectral(m.spec_a);
}

PeriodicSpectral::Projection PeriodicSpectral::project(const VectorField& v) const
{
    require_same_grid(v.spec(), impl_->spec, "PeriodicSpectral::project");
    Impl& m = *impl_;
    const GridSpec& g = m.spec;
    fftw_complex* vx = m.spec_a;
    fftw_complex* vy = m.spec_b;
    m.to_spectral(v.x, vx);
    m.to_spectral(v.y, vy);

    std::vector<std::complex<double>> phi(static_cast<std::size_t>(m.nkx) * static_cast<std::size_t>(g.ny()));
    const double tiny = 1e-12 * (1.0 / (g.dx() * g.dx()) + 1.0 / (g.dy() * g.dy()));
    for (int ky = 0; ky < g.ny(); ++ky) {
        const double sy = std::sin(2.0 * std::numbers::pi * ky / g.ny()) / g.dy();
        for (int kx = 0; kx < m.nkx; ++kx) {
            const std::size_t k = m.k_index(kx, ky);
            if (kx == 0 && ky == 0)
                continue;
            const double sx = std::sin(2.0 * std::numbers::pi * kx / g.nx()) / g.dx();
            const double s2 = sx * sx + sy * sy;
            std::complex<double> ux(vx[k][0], vx[k][1]);
            std::complex<double> uy(vy[k][0], vy[k][1]);
            if (s2 < tiny) {
                ux = uy = 0.0;
            } else {
                const std::complex<double> sdotu = sx * ux + sy * uy;
                phi[k] = std::complex<double>(0.0, -1.0) * sdotu / s2;
                ux -= sx * sdotu / s2;
                uy -= sy * sdotu / s2;
            }
            vx[k][0] = ux.real();
            vx[k][1] = ux.imag();
            vy[k][0] = uy.real();
            vy[k][1] = uy.imag();
        }
    }
    ScalarField px = m.from_spectral(vx);
    ScalarField py = m.from_spectral(vy);
    for (std::size_t k = 0; k < phi.size(); ++k) {
        m.spec_a[k][0] = phi[k].real();
        m.spec_a[k][1] = phi[k].imag();
    }
    ScalarField potential = m.from_spectral(m.spec_a);
    return Projection{VectorField(std::move(px), std::move(py)), std::move(potential)};
}

struct CosineSpectral::Impl {
    GridSpec spec;
    std::vector<double> lap_x, lap_y, central_x, central_y;
    double* in = nullptr;
    double* out = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    explicit Impl(const GridSpec& g)
        : spec(g), lap_x(symbol_table(g.nx(), g.dx(), 0.5 * std::numbers::pi / g.nx(), 2.0)),
          lap_y(symbol_table(g.ny(), g.dy(), 0.5 * std::numbers::pi / g.ny(), 2.0)),
          central_x(symbol_table(g.nx(), g.dx(), std::numbers::pi / g.nx(), 1.0)),
          central_y(symbol_table(g.ny(), g.dy(), std::numbers::pi / g.ny(), 1.0))
    {
        if (g.bc() != BcMode::Physical)
            throw std::invalid_argument("CosineSpectral requires a Physical grid");
        in = fftw_alloc_real(g.size());
        out = fftw_alloc_real(g.size());
        std::lock_guard<std::mutex> lock(planner_mutex());
        forward = fftw_plan_r2r_2d(g.ny(), g.nx(), in, out, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
        backward = fftw_plan_r2r_2d(g.ny(), g.nx(), out, in, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
    }

    ~Impl()
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(in);
        fftw_free(out);
    }
};

CosineSpectral::CosineSpectral(const GridSpec& spec) : impl_(std::make_unique<Impl>(spec)) {}
CosineSpectral::~CosineSpectral() = default;
CosineSpectral::CosineSpectral(CosineSpectral&&) noexcept = default;
CosineSpectral& CosineSpectral::operator=(CosineSpectral&&) noexcept = default;

const GridSpec& CosineSpectral::spec() const { return impl_->spec; }

double CosineSpectral::laplacian_symbol(int mx, int my) const
{
    return -(impl_->lap_x.at(static_cast<std::size_t>(mx)) + impl_->lap_y.at(static_cast<std::size_t>(my)));
}

double CosineSpectral::central_symbol(int mx, int my) const
{
    return -(impl_->central_x.at(static_cast<std::size_t>(mx)) + impl_->central_y.at(static_cast<std::size_t>(my)));
}

ScalarField CosineSpectral::apply(const ScalarField& f, const std::function<double(int, int)>& multiplier) const
{
    require_same_grid(f.spec(), impl_->spec, "CosineSpectral::apply");
    Impl& m = *impl_;
    const GridSpec& g = m.spec;
    std::copy(f.values().begin(), f.values().end(), m.in);
    fftw_execute(m.forward);
    // REDFT10 followed by REDFT01 scales by 2n per dimension.
    const double norm = 1.0 / (4.0 * g.nx() * g.ny());
    for (int my = 0; my < g.ny(); ++my)
        for (int mx = 0; mx < g.nx(); ++mx)
            m.out[mx + g.nx() * my] *= norm * multiplier(mx, my);
    fftw_execute(m.backward);
    return ScalarField(g, std::vector<double>(m.in, m.in + g.size()));
}

}  // namespace phasesep
