#include "helm/elm.hpp"

#include "helm/error.hpp"

#include <cmath>
#include <string>

namespace helm {

std::string_view to_string(Activation activation) {
    switch (activation) {
        case Activation::sigmoid: return "sigmoid";
        case Activation::identity: return "identity";
    }
    return "unknown";
}

Activation activation_from_string(std::string_view name) {
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "identity") return Activation::identity;
    throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

ElmLayer random_layer(Eigen::Index input_dim, Eigen::Index hidden_dim, Activation activation,
                      RngStream& rng) {
    if (input_dim < 1 || hidden_dim < 1) {
        throw InvalidArgument("random_layer: dimensions must be positive, got " +
                              std::to_string(input_dim) + " x " + std::to_string(hidden_dim));
    }
    ElmLayer layer;
    layer.input_weights = rng.uniform_matrix(input_dim, hidden_dim, -1.0, 1.0);
    layer.bias = rng.uniform_matrix(hidden_dim, 1, -1.0, 1.0);
    layer.activation = activation;
    return layer;
}

Matrix hidden(const ElmLayer& layer, const MatrixRef& x) {
    if (x.cols() != layer.input_dim()) {
        throw DimensionError("hidden: input has " + std::to_string(x.cols()) +
                             " columns, layer expects " + std::to_string(layer.input_dim()));
    }
    Matrix h = x * layer.input_weights;
    h.rowwise() += layer.bias.transpose();
    if (layer.activation == Activation::sigmoid) {
        h = (1.0 + (-h.array()).exp()).inverse();
    }
    return h;
}

Matrix predict(const ElmLayer& layer, const MatrixRef& x) {
    if (!layer.trained()) {
        throw InvalidArgument("predict: layer has no output weights");
    }
    return hidden(layer, x) * *layer.output_weights;
}

Matrix ridge_solve(const MatrixRef& h, const MatrixRef& target, double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
        throw InvalidArgument("ridge_solve: C must be finite and >= 0");
    }
    if (h.rows() != target.rows()) {
        throw DimensionError("ridge_solve: H has " + std::to_string(h.rows()) +
                             " rows, T has " + std::to_string(target.rows()));
    }
    require_finite(h, "ridge_solve H");
    require_finite(target, "ridge_solve T");

    Matrix gram = h.transpose() * h;
    gram.diagonal().array() += c;
    const Matrix rhs = h.transpose() * target;

    Eigen::LLT<Matrix> llt(gram);
    Matrix beta;
    constexpr double kMinRcond = 1e-13;
    if (llt.info() == Eigen::Success && (c > 0.0 || llt.rcond() > kMinRcond)) {
        beta = llt.solve(rhs);
    } else if (c == 0.0) {
        beta = h.completeOrthogonalDecomposition().solve(target);
    } else {
        // C > 0 yet the factorization failed: only round-off can cause this.
        beta = gram.completeOrthogonalDecomposition().solve(rhs);
    }
    if (!beta.allFinite()) {
        throw NumericalError("ridge_solve: non-finite solution");
    }
    return beta;
}

}  // namespace helm
