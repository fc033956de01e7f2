#pragma once

#include "helm/core_types.hpp"

#include <optional>
#include <string_view>

namespace helm {

enum class Activation { sigmoid, identity };

std::string_view to_string(Activation activation);
Activation activation_from_string(std::string_view name);

/// Single hidden layer with random, fixed input weights.
///
/// `input_weights` is D x L, `bias` has length L. `output_weights` (L x D_Y)
/// is empty until the layer is trained.
struct ElmLayer {
    Matrix input_weights;
    Vector bias;
    Activation activation = Activation::sigmoid;
    std::optional<Matrix> output_weights;

    Eigen::Index input_dim() const { return input_weights.rows(); }
    Eigen::Index hidden_dim() const { return input_weights.cols(); }
    bool trained() const { return output_weights.has_value(); }
};

/// Draws A (D x L) and B (L) i.i.d. uniform on [-1, 1].
ElmLayer random_layer(Eigen::Index input_dim, Eigen::Index hidden_dim, Activation activation,
                      RngStream& rng);

/// H = g(X A + B), one row per sample.
Matrix hidden(const ElmLayer& layer, const MatrixRef& x);

/// Y = H beta for a trained layer.
Matrix predict(const ElmLayer& layer, const MatrixRef& x);

/// Ridge output weights beta = (C I + H^T H)^{-1} H^T T.
///
/// Solved through a Cholesky factorization of the L x L Gram matrix. With
/// C = 0 and a singular Gram matrix the minimum-norm least-squares solution
/// is returned instead.
Matrix ridge_solve(const MatrixRef& h, const MatrixRef& target, double c);

}  // namespace helm
