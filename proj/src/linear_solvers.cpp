#include "phasesep/linear_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace phasesep {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_abs(const std::vector<double>& a)
{
    double m = 0.0;
    for (double v : a)
        m = std::max(m, std::abs(v));
    return m;
}

void remove_mean(std::vector<double>& a)
{
    if (a.empty())
        return;
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
    for (double& v : a)
        v -= mean;
}

}  // namespace

CgResult conjugate_gradient(const LinearOperator& apply, const std::vector<double>& b_in,
                            std::vector<double> x, const CgOptions& opts)
{
    const std::size_t n = b_in.size();
    std::vector<double> b = b_in;
    if (x.size() != n)
        x.assign(n, 0.0);
    if (opts.zero_mean) {
        remove_mean(b);
        remove_mean(x);
    }

    std::vector<double> r(n), p(n), ap(n);
    apply(x, ap);
    for (std::size_t k = 0; k < n; ++k)
        r[k] = b[k] - ap[k];
    if (opts.zero_mean)
        remove_mean(r);

    const double bnorm = std::sqrt(dot(b, b));
    auto done = [&](double rr, const std::vector<double>& res) {
        if (bnorm == 0.0 || std::sqrt(rr) <= opts.rel_tol * bnorm)
            return true;
        return opts.max_abs_tol > 0.0 && max_abs(res) <= opts.max_abs_tol;
    };

    std::vector<double> z(n);
    auto precondition = [&]() {
        if (opts.preconditioner) {
            opts.preconditioner(r, z);
            if (opts.zero_mean)
                remove_mean(z);
        } else {
            z = r;
        }
    };

    CgResult result;
    double rr = dot(r, r);
    double rz = 0.0;
    if (!done(rr, r)) {
        precondition();
        rz = dot(r, z);
        p = z;
    }
    int it = 0;
    while (!done(rr, r) && it < opts.max_iters) {
        apply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0))
            break;
        const double alpha = rz / pap;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        if (opts.zero_mean)
            remove_mean(r);
        rr = dot(r, r);
        precondition();
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < n; ++k)
            p[k] = z[k] + beta * p[k];
        ++it;
    }
    result.converged = done(rr, r);
    result.iterations = it;
    result.residual_l2 = std::sqrt(rr);
    result.residual_max = max_abs(r);
    result.x = std::move(x);
    return result;
}

}  // namespace phasesep
