#pragma once

#include "helm/core_types.hpp"
#include "helm/elm.hpp"
#include "helm/helm.hpp"

namespace helm {

/// Principal components of centered training data.
struct PcaModel {
    Matrix components;          // D x L, orthonormal columns
    Vector explained_variance;  // eigenvalues of the kept components, non-increasing
    Vector mean;                // D
    double total_variance = 0.0;

    Eigen::Index num_components() const { return components.cols(); }
};

/// Fraction of variance a PCA feature map may keep before it is cut.
inline constexpr double kPcaVarianceCap = 0.99;

/// Eigendecomposition of the sample covariance of `x_train`.
///
/// Keeps at most `max_components` components and stops at the first count
/// whose cumulative explained variance reaches 99%.
PcaModel pca_fit(const MatrixRef& x_train, Eigen::Index max_components);

/// Scores (X - mean) * components.
Matrix pca_transform(const PcaModel& model, const MatrixRef& x);

/// Back-projection scores * components^T + mean.
Matrix pca_reconstruct(const PcaModel& model, const MatrixRef& scores);

/// PCA feature map followed by a one-class ELM head. Input is standardized
/// with training statistics before the PCA.
struct PcaElmModel {
    NormalizationStats norm;
    PcaModel pca;
    ElmLayer top;
    HelmConfig config;  // top_size, c, activation, seed are used
    Eigen::Index requested_components = 0;

    Eigen::Index input_dim() const { return norm.dimension(); }
};

PcaElmModel pca_elm_train(const MatrixRef& x_train, Eigen::Index components,
                          const HelmConfig& config, RngStream& rng);

Vector pca_elm_run(const PcaElmModel& model, const MatrixRef& x);

}  // namespace helm
