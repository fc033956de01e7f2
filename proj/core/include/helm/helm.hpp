#pragma once

#include "helm/core_types.hpp"
#include "helm/elm.hpp"
#include "helm/fista.hpp"

#include <cstdint>
#include <vector>

namespace helm {

/// Hyperparameters of a hierarchical ELM.
///
/// Defaults reproduce the best-average HELM cell of the synthetic benchmark:
/// one autoencoder with 20 neurons, a 100-neuron one-class head,
/// lambda = 1e-2, C = 1e-5, five ensemble members.
struct HelmConfig {
    std::vector<Eigen::Index> ae_sizes{20};  // L_1 .. L_N
    Eigen::Index top_size = 100;             // L_{N+1}
    double lambda = 1e-2;                    // autoencoder L1 weight
    double c = 1e-5;                         // one-class ridge weight
    int ensemble_size = 5;
    std::uint64_t seed = 0;
    Activation activation = Activation::sigmoid;
    double fista_delta = 0.9;
    double fista_epsilon = 1e-6;
    int fista_max_iter = 500;

    void validate() const;
    FistaParams fista() const;
};

/// Trained HELM: stacked autoencoder output weights and a one-class head.
///
/// Only the beta_i of the autoencoders are kept; their random input weights
/// are not needed at run time. An empty `ae_betas` is a plain one-class ELM.
struct HelmModel {
    std::vector<Matrix> ae_betas;  // beta_i is L_i x D_i
    ElmLayer top;                  // output_weights is L_{N+1} x 1
    NormalizationStats norm;
    HelmConfig config;

    Eigen::Index input_dim() const { return norm.dimension(); }
};

/// Diagnostics of one training run.
struct HelmTrainInfo {
    std::vector<int> fista_iterations;
    std::vector<bool> fista_converged;
};

/// Trains a HELM on raw healthy data.
///
/// Normalization statistics are fitted on `x_train` and stored in the model.
/// For each autoencoder i: draw (A_i, B_i), H_i = g(x_i A_i + B_i),
/// beta_i = FISTA(H_i, x_i, lambda), x_{i+1} = x_i beta_i^T. The head is a
/// ridge one-class ELM on x_{N+1} with target 1.
HelmModel helm_train(const MatrixRef& x_train, const HelmConfig& config, RngStream& rng,
                     HelmTrainInfo* info = nullptr);

/// One-class ELM without feature learning (HELM with zero autoencoders).
/// `config.ae_sizes` is ignored.
HelmModel train_one_class_elm(const MatrixRef& x_train, const HelmConfig& config,
                              RngStream& rng);

/// Features fed to the head: normalized input mapped linearly through every
/// autoencoder, x_{i+1} = x_i beta_i^T, no activation.
Matrix helm_features(const HelmModel& model, const MatrixRef& x);

/// Runs the model on raw data; returns the one-class output Y (length K).
Vector helm_run(const HelmModel& model, const MatrixRef& x);

/// Trains the one-class head: random layer on `features`, ridge fit to T = 1.
ElmLayer train_one_class_head(const MatrixRef& features, Eigen::Index hidden_size, double c,
                              Activation activation, RngStream& rng);

/// Output of a trained one-class head as a vector.
Vector one_class_output(const ElmLayer& head, const MatrixRef& features);

}  // namespace helm
