#include "helm/fista.hpp"

#include "helm/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace helm {

void FistaParams::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("fista: lambda must be finite and >= 0");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidArgument("fista: delta must lie strictly inside (0, 1)");
    }
    if (!(epsilon >= 0.0)) {
        throw InvalidArgument("fista: epsilon must be >= 0");
    }
    if (max_iter < 1) {
        throw InvalidArgument("fista: max_iter must be >= 1");
    }
}

Matrix soft_threshold(const MatrixRef& c, double t) {
    return c.unaryExpr([t](double v) {
        const double shrunk = std::abs(v) - t;
        if (shrunk <= 0.0) return 0.0;
        return v < 0.0 ? -shrunk : shrunk;
    });
}

namespace {

/// Largest eigenvalue of a symmetric positive semi-definite matrix.
double power_iteration(const Matrix& gram) {
    if (gram.size() == 0) return 0.0;
    Vector v = Vector::Ones(gram.rows()) / std::sqrt(static_cast<double>(gram.rows()));
    double eig = 0.0;
    for (int it = 0; it < 100; ++it) {
        Vector w = gram * v;
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        const double next = v.dot(w);
        v = w / norm;
        const bool settled = it > 0 && std::abs(next - eig) <= 1e-10 * std::abs(next);
        eig = next;
        if (settled) break;
    }
    return eig;
}

}  // namespace

double spectral_norm(const MatrixRef& h) {
    const Matrix gram = h.transpose() * h;
    return std::sqrt(std::max(power_iteration(gram), 0.0));
}

double lasso_objective(const MatrixRef& h, const MatrixRef& target, const MatrixRef& beta,
                       double lambda) {
    return (h * beta - target).squaredNorm() + lambda * beta.cwiseAbs().sum();
}

FistaResult fista_solve(const MatrixRef& h, const MatrixRef& target, const FistaParams& params) {
    return fista_solve(h, target, params, Matrix::Zero(h.cols(), target.cols()));
}

FistaResult fista_solve(const MatrixRef& h, const MatrixRef& target, const FistaParams& params,
                        const MatrixRef& beta0) {
    params.validate();
    if (h.rows() != target.rows()) {
        throw DimensionError("fista: H has " + std::to_string(h.rows()) + " rows, target has " +
                             std::to_string(target.rows()));
    }
    if (beta0.rows() != h.cols() || beta0.cols() != target.cols()) {
        throw DimensionError("fista: initial beta must be " + std::to_string(h.cols()) + " x " +
                             std::to_string(target.cols()));
    }
    require_finite(h, "fista H");
    require_finite(target, "fista target");
    require_finite(beta0, "fista initial beta");

    // The gradient 2 H^T (H y - X) only needs the Gram matrix and H^T X.
    const Matrix gram = h.transpose() * h;
    const Matrix htx = h.transpose() * target;
    const double sigma = std::sqrt(std::max(power_iteration(gram), 0.0));

    FistaResult result;
    result.step = params.delta / (2.0 * (1.0 + sigma * sigma));
    const double gamma = result.step;
    const double shrink = params.lambda * gamma;

    Matrix beta = beta0;
    Matrix y = beta0;
    double t = 1.0;
    double crit = std::numeric_limits<double>::infinity();
    int k = 0;
    while (crit >= params.epsilon && k < params.max_iter) {
        const Matrix c = y - 2.0 * gamma * (gram * y - htx);
        Matrix next = soft_threshold(c, shrink);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = next + ((t - 1.0) / t_next) * (beta - next);
        crit = (beta - next).norm();
        beta = std::move(next);
        t = t_next;
        ++k;
    }
    if (!beta.allFinite()) {
        throw NumericalError("fista: iterates became non-finite");
    }
    result.beta = std::move(beta);
    result.iterations = k;
    result.converged = crit < params.epsilon;
    return result;
}

}  // namespace helm
