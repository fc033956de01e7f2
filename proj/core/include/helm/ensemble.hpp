#pragma once

#include "helm/core_types.hpp"
#include "helm/helm.hpp"
#include "helm/pca.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace helm {

/// The model families compared in the benchmark.
enum class ModelKind { helm, elm, pca_elm };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

struct ModelConfig {
    ModelKind kind = ModelKind::helm;
    HelmConfig helm;                    // shared ELM hyperparameters
    Eigen::Index pca_components = 15;   // PCA-ELM only

    void validate() const;
};

using EnsembleMember = std::variant<HelmModel, PcaElmModel>;

/// Independently trained members whose outputs are averaged.
struct Ensemble {
    ModelConfig config;
    std::vector<EnsembleMember> members;

    Eigen::Index input_dim() const;
};

/// Stream used by member `index` of an ensemble seeded from `base`.
RngStream member_stream(const RngStream& base, std::size_t index);

/// Stream for training model family `kind` in benchmark repetition `rep`.
RngStream model_stream(std::uint64_t seed, std::uint64_t rep, ModelKind kind);

/// Trains `config.helm.ensemble_size` members on raw training data.
Ensemble train_ensemble(const MatrixRef& x_train, const ModelConfig& config,
                        const RngStream& base);

/// Output of one member on raw data.
Vector run_member(const EnsembleMember& member, const MatrixRef& x);

/// Mean of the member outputs.
Vector run_ensemble(const Ensemble& ensemble, const MatrixRef& x);

}  // namespace helm
