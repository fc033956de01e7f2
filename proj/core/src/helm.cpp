#include "helm/helm.hpp"

#include "helm/error.hpp"

#include <cmath>
#include <string>

namespace helm {

void HelmConfig::validate() const {
    for (const auto size : ae_sizes) {
        if (size < 1) throw InvalidArgument("helm: autoencoder sizes must be >= 1");
    }
    if (top_size < 1) throw InvalidArgument("helm: one-class layer size must be >= 1");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("helm: lambda must be finite and >= 0");
    }
    if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("helm: C must be finite and >= 0");
    if (ensemble_size < 1) throw InvalidArgument("helm: ensemble size must be >= 1");
    fista().validate();
}

FistaParams HelmConfig::fista() const {
    return FistaParams{lambda, fista_delta, fista_epsilon, fista_max_iter};
}

ElmLayer train_one_class_head(const MatrixRef& features, Eigen::Index hidden_size, double c,
                              Activation activation, RngStream& rng) {
    ElmLayer head = random_layer(features.cols(), hidden_size, activation, rng);
    const Matrix h = hidden(head, features);
    head.output_weights = ridge_solve(h, Matrix::Ones(features.rows(), 1), c);
    return head;
}

Vector one_class_output(const ElmLayer& head, const MatrixRef& features) {
    return predict(head, features).col(0);
}

HelmModel helm_train(const MatrixRef& x_train, const HelmConfig& config, RngStream& rng,
                     HelmTrainInfo* info) {
    config.validate();
    if (config.ae_sizes.empty()) {
        throw InvalidArgument("helm_train: at least one autoencoder layer is required");
    }
    HelmModel model;
    model.config = config;
    model.norm = fit_normalization(x_train);

    Matrix x = apply_normalization(x_train, model.norm);
    const FistaParams fista = config.fista();
    for (const auto size : config.ae_sizes) {
        const ElmLayer encoder = random_layer(x.cols(), size, config.activation, rng);
        const Matrix h = hidden(encoder, x);
        FistaResult fit = fista_solve(h, x, fista);
        if (info) {
            info->fista_iterations.push_back(fit.iterations);
            info->fista_converged.push_back(fit.converged);
        }
        x = x * fit.beta.transpose();
        model.ae_betas.push_back(std::move(fit.beta));
    }
    model.top = train_one_class_head(x, config.top_size, config.c, config.activation, rng);
    return model;
}

HelmModel train_one_class_elm(const MatrixRef& x_train, const HelmConfig& config,
                              RngStream& rng) {
    HelmConfig cfg = config;
    cfg.ae_sizes.clear();
    cfg.validate();
    HelmModel model;
    model.config = cfg;
    model.norm = fit_normalization(x_train);
    const Matrix x = apply_normalization(x_train, model.norm);
    model.top = train_one_class_head(x, cfg.top_size, cfg.c, cfg.activation, rng);
    return model;
}

Matrix helm_features(const HelmModel& model, const MatrixRef& x) {
    if (x.cols() != model.input_dim()) {
        throw DimensionError("helm_run: input has " + std::to_string(x.cols()) +
                             " columns, model expects " + std::to_string(model.input_dim()));
    }
    Matrix features = apply_normalization(x, model.norm);
    for (const auto& beta : model.ae_betas) {
        if (beta.cols() != features.cols()) {
            throw DimensionError("helm_run: autoencoder chain mismatch");
        }
        features = features * beta.transpose();
    }
    return features;
}

Vector helm_run(const HelmModel& model, const MatrixRef& x) {
    return one_class_output(model.top, helm_features(model, x));
}

}  // namespace helm
