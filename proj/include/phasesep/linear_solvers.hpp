#pragma once

#include <functional>
#include <vector>

namespace phasesep {

using LinearOperator = std::function<void(const std::vector<double>& in, std::vector<double>& out)>;

struct CgOptions {
    double rel_tol = 1e-10;     ///< stop when |r|_2 <= rel_tol * |b|_2
    double max_abs_tol = 0.0;   ///< or when max|r| <= max_abs_tol (disabled at 0)
    int max_iters = 10000;
    bool zero_mean = false;     ///< keep iterates in the mean-zero subspace
    LinearOperator preconditioner;   ///< optional SPD approximation of the inverse
};

struct CgResult {
    std::vector<double> x;
    int iterations = 0;
    double residual_l2 = 0.0;
    double residual_max = 0.0;
    bool converged = false;
};

/// (Preconditioned) conjugate gradients for a symmetric positive
/// (semi-)definite operator.
CgResult conjugate_gradient(const LinearOperator& apply, const std::vector<double>& b,
                            std::vector<double> x0, const CgOptions& opts);

}  // namespace phasesep
