#pragma once

#include "helm/core_types.hpp"

namespace helm {

/// Parameters of the accelerated shrinkage solver.
struct FistaParams {
    double lambda = 1e-2;  // L1 weight
    double delta = 0.9;    // step scale, strictly inside (0, 1)
    double epsilon = 1e-6; // stop once ||beta_k - beta_{k+1}||_2 < epsilon
    int max_iter = 500;

    void validate() const;
};

struct FistaResult {
    Matrix beta;     // L x D
    int iterations = 0;
    bool converged = false;
    double step = 0.0;  // gamma actually used
};

/// Elementwise max(|c| - t, 0) * sign(c).
Matrix soft_threshold(const MatrixRef& c, double t);

/// Operator 2-norm of `h` by power iteration on H^T H
/// (at most 100 iterations, stops at 1e-10 relative change).
double spectral_norm(const MatrixRef& h);

/// ||H beta - X||_F^2 + lambda * ||beta||_1.
double lasso_objective(const MatrixRef& h, const MatrixRef& target, const MatrixRef& beta,
                       double lambda);

/// Minimizes ||H beta - X||_F^2 + lambda ||beta||_1 with FISTA.
///
/// Starts from beta = y = 0, t = 1. Step gamma = delta / (2 (1 + ||H||_2^2)).
/// Reaching max_iter is reported through `converged`, not as an error.
FistaResult fista_solve(const MatrixRef& h, const MatrixRef& target, const FistaParams& params);

/// Same iteration started from `beta0` (y_0 = beta_0 = beta0).
FistaResult fista_solve(const MatrixRef& h, const MatrixRef& target, const FistaParams& params,
                        const MatrixRef& beta0);

}  // namespace helm
