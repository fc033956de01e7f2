#include "helm/pca.hpp"

#include "helm/error.hpp"

#include <string>

namespace helm {

PcaModel pca_fit(const MatrixRef& x_train, Eigen::Index max_components) {
    require_nonempty(x_train, "pca_fit");
    if (max_components < 1) {
        throw InvalidArgument("pca_fit: number of components must be >= 1");
    }
    if (x_train.rows() < 2) throw InvalidArgument("pca_fit: need at least 2 samples");
    require_finite(x_train, "pca_fit");

    PcaModel model;
    model.mean = x_train.colwise().mean().transpose();
    const Matrix centered = x_train.rowwise() - model.mean.transpose();
    const Matrix cov = (centered.transpose() * centered) / static_cast<double>(x_train.rows() - 1);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("pca_fit: eigendecomposition failed");
    }
    // Eigen sorts ascending; flip to descending and drop round-off negatives.
    const Eigen::Index d = cov.rows();
    Vector values = eig.eigenvalues().reverse().cwiseMax(0.0);
    Matrix vectors = eig.eigenvectors().rowwise().reverse();
    model.total_variance = values.sum();

    const Eigen::Index cap = std::min({max_components, d, x_train.rows()});
    Eigen::Index keep = cap;
    if (model.total_variance > 0.0) {
        double cumulative = 0.0;
        for (Eigen::Index i = 0; i < cap; ++i) {
            cumulative += values[i];
            if (cumulative / model.total_variance >= kPcaVarianceCap) {
                keep = i + 1;
                break;
            }
        }
    }
    model.components = vectors.leftCols(keep);
    model.explained_variance = values.head(keep);
    return model;
}

Matrix pca_transform(const PcaModel& model, const MatrixRef& x) {
    if (x.cols() != model.mean.size()) {
        throw DimensionError("pca_transform: input has " + std::to_string(x.cols()) +
                             " columns, model expects " + std::to_string(model.mean.size()));
    }
    return (x.rowwise() - model.mean.transpose()) * model.components;
}

Matrix pca_reconstruct(const PcaModel& model, const MatrixRef& scores) {
    if (scores.cols() != model.num_components()) {
        throw DimensionError("pca_reconstruct: scores have " + std::to_string(scores.cols()) +
                             " columns, model has " +
                             std::to_string(model.num_components()) + " components");
    }
    Matrix x = scores * model.components.transpose();
    x.rowwise() += model.mean.transpose();
    return x;
}

PcaElmModel pca_elm_train(const MatrixRef& x_train, Eigen::Index components,
                          const HelmConfig& config, RngStream& rng) {
    HelmConfig cfg = config;
    cfg.ae_sizes.clear();
    cfg.validate();
    PcaElmModel model;
    model.config = cfg;
    model.requested_components = components;
    model.norm = fit_normalization(x_train);
    const Matrix z = apply_normalization(x_train, model.norm);
    model.pca = pca_fit(z, components);
    model.top = train_one_class_head(pca_transform(model.pca, z), cfg.top_size, cfg.c,
                                     cfg.activation, rng);
    return model;
}

Vector pca_elm_run(const PcaElmModel& model, const MatrixRef& x) {
    const Matrix z = apply_normalization(x, model.norm);
    return one_class_output(model.top, pca_transform(model.pca, z));
}

}  // namespace helm
