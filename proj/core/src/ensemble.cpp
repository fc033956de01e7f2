#include "helm/ensemble.hpp"

#include "helm/error.hpp"

#include <string>

namespace helm {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::helm: return "helm";
        case ModelKind::elm: return "elm";
        case ModelKind::pca_elm: return "pca-elm";
    }
    return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
    if (name == "helm") return ModelKind::helm;
    if (name == "elm") return ModelKind::elm;
    if (name == "pca-elm" || name == "pcaelm" || name == "pca_elm") return ModelKind::pca_elm;
    throw InvalidArgument("unknown model '" + std::string(name) +
                          "' (expected helm, elm or pca-elm)");
}

void ModelConfig::validate() const {
    helm.validate();
    if (kind == ModelKind::helm && helm.ae_sizes.empty()) {
        throw InvalidArgument("helm model needs at least one autoencoder layer");
    }
    if (kind == ModelKind::pca_elm && pca_components < 1) {
        throw InvalidArgument("pca-elm needs at least one component");
    }
}

Eigen::Index Ensemble::input_dim() const {
    if (members.empty()) return 0;
    return std::visit([](const auto& m) { return m.input_dim(); }, members.front());
}

RngStream member_stream(const RngStream& base, std::size_t index) {
    return base.child(0x6d656d62ULL + index);
}

RngStream model_stream(std::uint64_t seed, std::uint64_t rep, ModelKind kind) {
    return RngStream(seed, rep).child(0x6d6f64656cULL + static_cast<std::uint64_t>(kind));
}

Ensemble train_ensemble(const MatrixRef& x_train, const ModelConfig& config,
                        const RngStream& base) {
    config.validate();
    Ensemble ensemble;
    ensemble.config = config;
    ensemble.members.reserve(static_cast<std::size_t>(config.helm.ensemble_size));
    for (int j = 0; j < config.helm.ensemble_size; ++j) {
        RngStream rng = member_stream(base, static_cast<std::size_t>(j));
        switch (config.kind) {
            case ModelKind::helm:
                ensemble.members.emplace_back(helm_train(x_train, config.helm, rng));
                break;
            case ModelKind::elm:
                ensemble.members.emplace_back(train_one_class_elm(x_train, config.helm, rng));
                break;
            case ModelKind::pca_elm:
                ensemble.members.emplace_back(
                    pca_elm_train(x_train, config.pca_components, config.helm, rng));
                break;
        }
    }
    return ensemble;
}

Vector run_member(const EnsembleMember& member, const MatrixRef& x) {
    struct Runner {
        const MatrixRef& x;
        Vector operator()(const HelmModel& m) const { return helm_run(m, x); }
        Vector operator()(const PcaElmModel& m) const { return pca_elm_run(m, x); }
    };
    return std::visit(Runner{x}, member);
}

Vector run_ensemble(const Ensemble& ensemble, const MatrixRef& x) {
    if (ensemble.members.empty()) {
        throw InvalidArgument("run_ensemble: ensemble has no members");
    }
    Vector sum = Vector::Zero(x.rows());
    for (const auto& member : ensemble.members) {
        sum += run_member(member, x);
    }
    return sum / static_cast<double>(ensemble.members.size());
}

}  // namespace helm
