#pragma once

// Uniform cell-centred 2D grid, field containers and second-order stencil
// operators.
//
// Sample (i, j) sits at x = (i + 1/2) dx, y = (j + 1/2) dy and is stored at
// index i + nx * j. Two boundary modes exist:
//   Periodic  all stencils wrap around.
//   Physical  walls on the outer cell faces. Scalars (c, theta, p, mu) use
//             even (mirror) ghosts, i.e. homogeneous Neumann; velocity and
//             flux components use odd (antisymmetric mirror) ghosts, which
//             puts a zero value on the wall face (no-slip / no-flux).

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace phasesep {

enum class BcMode { Periodic, Physical };

/// Reflection parity used to build ghost values in Physical mode.
enum class Parity { Even, Odd };

std::string to_string(BcMode mode);

class GridSpec {
public:
    GridSpec(int nx, int ny, double lx, double ly, BcMode bc = BcMode::Periodic);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double lx() const { return lx_; }
    double ly() const { return ly_; }
    BcMode bc() const { return bc_; }
    double dx() const { return lx_ / nx_; }
    double dy() const { return ly_ / ny_; }
    double cell_area() const { return dx() * dy(); }
    double area() const { return lx_ * ly_; }
    std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }

    double x(int i) const { return (i + 0.5) * dx(); }
    double y(int j) const { return (j + 0.5) * dy(); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    int nx_;
    int ny_;
    double lx_;
    double ly_;
    BcMode bc_;
};

/// Thrown when two fields on different grids are combined.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

class ScalarField {
public:
    explicit ScalarField(const GridSpec& spec, double value = 0.0);
    ScalarField(const GridSpec& spec, std::vector<double> values);

    /// Samples `fn(x, y)` at the cell centres.
    static ScalarField from_function(const GridSpec& spec,
                                     const std::function<double(double, double)>& fn);

    const GridSpec& spec() const { return spec_; }
    std::size_t size() const { return values_.size(); }

    double& operator()(int i, int j) { return values_[static_cast<std::size_t>(i + spec_.nx() * j)]; }
    double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i + spec_.nx() * j)]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool all_finite() const;
    double max_abs() const;
    double min() const;
    double max() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);

private:
    GridSpec spec_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double s);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

struct VectorField {
    ScalarField x;
    ScalarField y;

    explicit VectorField(const GridSpec& spec) : x(spec), y(spec) {}
    VectorField(ScalarField fx, ScalarField fy);

    const GridSpec& spec() const { return x.spec(); }
    bool all_finite() const { return x.all_finite() && y.all_finite(); }
};

/// Second-order tensor samples, component (a, b) = d v_a / d x_b for
/// velocity gradients.
struct TensorField {
    ScalarField xx;
    ScalarField xy;
    ScalarField yx;
    ScalarField yy;

    explicit TensorField(const GridSpec& spec) : xx(spec), xy(spec), yx(spec), yy(spec) {}
    const GridSpec& spec() const { return xx.spec(); }
};

/// Normal components on cell faces. `x` holds (nx + 1) * ny values, face f
/// of row j lying between cells f - 1 and f; `y` holds nx * (ny + 1) values.
/// In Periodic mode face 0 and face nx coincide and carry equal values.
class FaceField {
public:
    explicit FaceField(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    double& x(int f, int j) { return x_[static_cast<std::size_t>(f + (spec_.nx() + 1) * j)]; }
    double x(int f, int j) const { return x_[static_cast<std::size_t>(f + (spec_.nx() + 1) * j)]; }
    double& y(int i, int f) { return y_[static_cast<std::size_t>(i + spec_.nx() * f)]; }
    double y(int i, int f) const { return y_[static_cast<std::size_t>(i + spec_.nx() * f)]; }

    /// Pointwise product with another face field.
    FaceField& operator*=(const FaceField& o);

private:
    GridSpec spec_;
    std::vector<double> x_;
    std::vector<double> y_;
};

namespace grid {

/// Value at (i, j) with i in [-2, nx + 1], j in [-2, ny + 1], applying the
/// boundary convention for ghosts.
double sample(const ScalarField& f, int i, int j, Parity parity);

ScalarField derivative_x(const ScalarField& f, Parity parity = Parity::Even);
ScalarField derivative_y(const ScalarField& f, Parity parity = Parity::Even);

/// Central-difference gradient of a scalar (even ghosts).
VectorField gradient(const ScalarField& f);

/// Central-difference divergence of a velocity/flux field (odd ghosts).
/// Discrete adjoint of `gradient`: sum f div F = -sum grad f . F.
ScalarField divergence(const VectorField& F);

/// Differences across faces, (f_i - f_{i-1}) / dx.
FaceField face_gradient(const ScalarField& f, Parity parity = Parity::Even);
/// Cell divergence of a face flux.
ScalarField face_divergence(const FaceField& F);
/// Arithmetic mean of the two cells adjacent to each face.
FaceField face_average(const ScalarField& f, Parity parity = Parity::Even);
/// Cell-centred |grad f|^2 from face differences: half the sum of the squared
/// differences on the four faces of the cell. Integrates to the face sum.
ScalarField face_gradient_sq(const ScalarField& f, Parity parity = Parity::Even);
/// Same split for a product of two face fields.
ScalarField face_product_to_cells(const FaceField& a, const FaceField& b);

/// Five-point Laplacian, defined as face_divergence(face_gradient(f)).
ScalarField laplacian(const ScalarField& f, Parity parity = Parity::Even);
ScalarField biharmonic(const ScalarField& f);

/// Scalar vorticity dx v_y - dy v_x.
ScalarField curl2d(const VectorField& v);
/// Component (a, b) = d v_a / d x_b, central differences with odd ghosts.
TensorField velocity_gradient(const VectorField& v);
TensorField sym_gradient(const VectorField& v);

/// Midpoint rule.
double integrate(const ScalarField& f);

/// v . grad f. Use Parity::Odd when f is a velocity component.
ScalarField advect(const ScalarField& f, const VectorField& v, Parity parity = Parity::Even);
/// div(f v) from face fluxes built with averaged face values; sums to zero
/// exactly in both boundary modes.
ScalarField conservative_advection(const ScalarField& f, const VectorField& v);

}  // namespace grid
}  // namespace phasesep
