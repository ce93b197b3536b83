#include "phasesep/grid.hpp"

#include <algorithm>
#include <cmath>

namespace phasesep {

std::string to_string(BcMode mode)
{
    return mode == BcMode::Periodic ? "periodic" : "physical";
}

GridSpec::GridSpec(int nx, int ny, double lx, double ly, BcMode bc)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly), bc_(bc)
{
    if (nx < 4 || ny < 4)
        throw std::invalid_argument("grid needs at least 4 cells per direction, got " +
                                    std::to_string(nx) + "x" + std::to_string(ny));
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
        throw std::invalid_argument("grid edge lengths must be positive and finite");
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where)
{
    if (!(a == b))
        throw GridMismatch(std::string(where) + ": fields live on different grids");
}

ScalarField::ScalarField(const GridSpec& spec, double value)
    : spec_(spec), values_(spec.size(), value)
{
}

ScalarField::ScalarField(const GridSpec& spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values))
{
    if (values_.size() != spec_.size())
        throw std::invalid_argument("ScalarField: value count does not match grid");
}

ScalarField ScalarField::from_function(const GridSpec& spec,
                                       const std::function<double(double, double)>& fn)
{
    ScalarField f(spec);
    for (int j = 0; j < spec.ny(); ++j)
        for (int i = 0; i < spec.nx(); ++i)
            f(i, j) = fn(spec.x(i), spec.y(j));
    return f;
}

bool ScalarField::all_finite() const
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::max_abs() const
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField& ScalarField::operator+=(const ScalarField& o)
{
    require_same_grid(spec_, o.spec_, "ScalarField::operator+=");
    for (std::size_t k = 0; k < values_.size(); ++k)
        values_[k] += o.values_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o)
{
    require_same_grid(spec_, o.spec_, "ScalarField::operator-=");
    for (std::size_t k = 0; k < values_.size(); ++k)
        values_[k] -= o.values_[k];
    return *this;
}

ScalarField& ScalarField::operator*=(double s)
{
    for (double& v : values_)
        v *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b)
{
    require_same_grid(a.spec(), b.spec(), "hadamard");
    ScalarField out(a.spec());
    for (std::size_t k = 0; k < a.size(); ++k)
        out[k] = a[k] * b[k];
    return out;
}

VectorField::VectorField(ScalarField fx, ScalarField fy) : x(std::move(fx)), y(std::move(fy))
{
    require_same_grid(x.spec(), y.spec(), "VectorField");
}

FaceField::FaceField(const GridSpec& spec)
    : spec_(spec),
      x_(static_cast<std::size_t>(spec.nx() + 1) * static_cast<std::size_t>(spec.ny()), 0.0),
      y_(static_cast<std::size_t>(spec.nx()) * static_cast<std::size_t>(spec.ny() + 1), 0.0)
{
}

FaceField& FaceField::operator*=(const FaceField& o)
{
    require_same_grid(spec_, o.spec_, "FaceField::operator*=");
    for (std::size_t k = 0; k < x_.size(); ++k)
        x_[k] *= o.x_[k];
    for (std::size_t k = 0; k < y_.size(); ++k)
        y_[k] *= o.y_[k];
    return *this;
}

namespace grid {

namespace {

inline int wrap(int i, int n)
{
    i %= n;
    return i < 0 ? i + n : i;
}

}  // namespace

double sample(const ScalarField& f, int i, int j, Parity parity)
{
    const GridSpec& g = f.spec();
    const int nx = g.nx();
    const int ny = g.ny();
    if (g.bc() == BcMode::Periodic)
        return f(wrap(i, nx), wrap(j, ny));

    double sign = 1.0;
    const double flip = parity == Parity::Odd ? -1.0 : 1.0;
    if (i < 0) {
        i = -1 - i;
        sign *= flip;
    } else if (i >= nx) {
        i = 2 * nx - 1 - i;
        sign *= flip;
    }
    if (j < 0) {
        j = -1 - j;
        sign *= flip;
    } else if (j >= ny) {
        j = 2 * ny - 1 - j;
        sign *= flip;
    }
    return sign * f(i, j);
}

ScalarField derivative_x(const ScalarField& f, Parity parity)
{
    const GridSpec& g = f.spec();
    const double inv = 1.0 / (2.0 * g.dx());
    ScalarField out(g);
    for (int j = 0; j < g.ny(); ++j) {
        out(0, j) = (sample(f, 1, j, parity) - sample(f, -1, j, parity)) * inv;
        for (int i = 1; i < g.nx() - 1; ++i)
            out(i, j) = (f(i + 1, j) - f(i - 1, j)) * inv;
        const int e = g.nx() - 1;
        out(e, j) = (sample(f, e + 1, j, parity) - sample(f, e - 1, j, parity)) * inv;
    }
    return out;
}

ScalarField derivative_y(const ScalarField& f, Parity parity)
{
    const GridSpec& g = f.spec();
    const double inv = 1.0 / (2.0 * g.dy());
    ScalarField out(g);
    for (int j = 0; j < g.ny(); ++j) {
        const bool edge = (j == 0 || j == g.ny() - 1);
        for (int i = 0; i < g.nx(); ++i) {
            out(i, j) = edge ? (sample(f, i, j + 1, parity) - sample(f, i, j - 1, parity)) * inv
                             : (f(i, j + 1) - f(i, j - 1)) * inv;
        }
    }
    return out;
}

VectorField gradient(const ScalarField& f)
{
    return VectorField(derivative_x(f, Parity::Even), derivative_y(f, Parity::Even));
}

ScalarField divergence(const VectorField& F)
{
    return derivative_x(F.x, Parity::Odd) + derivative_y(F.y, Parity::Odd);
}

FaceField face_gradient(const ScalarField& f, Parity parity)
{
    const GridSpec& g = f.spec();
    const double idx = 1.0 / g.dx();
    const double idy = 1.0 / g.dy();
    FaceField out(g);
    for (int j = 0; j < g.ny(); ++j) {
        out.x(0, j) = (f(0, j) - sample(f, -1, j, parity)) * idx;
        for (int fi = 1; fi < g.nx(); ++fi)
            out.x(fi, j) = (f(fi, j) - f(fi - 1, j)) * idx;
        out.x(g.nx(), j) = (sample(f, g.nx(), j, parity) - f(g.nx() - 1, j)) * idx;
    }
    for (int i = 0; i < g.nx(); ++i) {
        out.y(i, 0) = (f(i, 0) - sample(f, i, -1, parity)) * idy;
        out.y(i, g.ny()) = (sample(f, i, g.ny(), parity) - f(i, g.ny() - 1)) * idy;
    }
    for (int fj = 1; fj < g.ny(); ++fj)
        for (int i = 0; i < g.nx(); ++i)
            out.y(i, fj) = (f(i, fj) - f(i, fj - 1)) * idy;
    return out;
}

ScalarField face_divergence(const FaceField& F)
{
    const GridSpec& g = F.spec();
    const double idx = 1.0 / g.dx();
    const double idy = 1.0 / g.dy();
    ScalarField out(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            out(i, j) = (F.x(i + 1, j) - F.x(i, j)) * idx + (F.y(i, j + 1) - F.y(i, j)) * idy;
    return out;
}

FaceField face_average(const ScalarField& f, Parity parity)
{
    const GridSpec& g = f.spec();
    FaceField out(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int fi = 0; fi <= g.nx(); ++fi)
            out.x(fi, j) = 0.5 * (sample(f, fi - 1, j, parity) + sample(f, fi, j, parity));
    for (int fj = 0; fj <= g.ny(); ++fj)
        for (int i = 0; i < g.nx(); ++i)
            out.y(i, fj) = 0.5 * (sample(f, i, fj - 1, parity) + sample(f, i, fj, parity));
    return out;
}

ScalarField face_product_to_cells(const FaceField& a, const FaceField& b)
{
    require_same_grid(a.spec(), b.spec(), "face_product_to_cells");
    const GridSpec& g = a.spec();
    ScalarField out(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            out(i, j) = 0.5 * (a.x(i, j) * b.x(i, j) + a.x(i + 1, j) * b.x(i + 1, j) +
                               a.y(i, j) * b.y(i, j) + a.y(i, j + 1) * b.y(i, j + 1));
    return out;
}

ScalarField face_gradient_sq(const ScalarField& f, Parity parity)
{
    const FaceField d = face_gradient(f, parity);
    return face_product_to_cells(d, d);
}

ScalarField laplacian(const ScalarField& f, Parity parity)
{
    return face_divergence(face_gradient(f, parity));
}

ScalarField biharmonic(const ScalarField& f)
{
    return laplacian(laplacian(f));
}

ScalarField curl2d(const VectorField& v)
{
    return derivative_x(v.y, Parity::Odd) - derivative_y(v.x, Parity::Odd);
}

TensorField velocity_gradient(const VectorField& v)
{
    TensorField t(v.spec());
    t.xx = derivative_x(v.x, Parity::Odd);
    t.xy = derivative_y(v.x, Parity::Odd);
    t.yx = derivative_x(v.y, Parity::Odd);
    t.yy = derivative_y(v.y, Parity::Odd);
    return t;
}

TensorField sym_gradient(const VectorField& v)
{
    TensorField d = velocity_gradient(v);
    for (std::size_t k = 0; k < d.xx.size(); ++k) {
        const double s = 0.5 * (d.xy[k] + d.yx[k]);
        d.xy[k] = s;
        d.yx[k] = s;
    }
    return d;
}

double integrate(const ScalarField& f)
{
    double sum = 0.0;
    for (double v : f.values())
        sum += v;
    return sum * f.spec().cell_area();
}

ScalarField advect(const ScalarField& f, const VectorField& v, Parity parity)
{
    require_same_grid(f.spec(), v.spec(), "advect");
    const ScalarField fx = derivative_x(f, parity);
    const ScalarField fy = derivative_y(f, parity);
    ScalarField out(f.spec());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = v.x[k] * fx[k] + v.y[k] * fy[k];
    return out;
}

ScalarField conservative_advection(const ScalarField& f, const VectorField& v)
{
    require_same_grid(f.spec(), v.spec(), "conservative_advection");
    FaceField flux = face_average(f, Parity::Even);
    const FaceField ux = face_average(v.x, Parity::Odd);
    const FaceField uy = face_average(v.y, Parity::Odd);
    const GridSpec& g = f.spec();
    for (int j = 0; j < g.ny(); ++j)
        for (int fi = 0; fi <= g.nx(); ++fi)
            flux.x(fi, j) *= ux.x(fi, j);
    for (int fj = 0; fj <= g.ny(); ++fj)
        for (int i = 0; i < g.nx(); ++i)
            flux.y(i, fj) *= uy.y(i, fj);
    return face_divergence(flux);
}

}  // namespace grid
}  // namespace phasesep
