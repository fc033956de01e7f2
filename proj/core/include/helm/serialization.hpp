#pragma once

#include "helm/detector.hpp"
#include "helm/ensemble.hpp"
#include "helm/synthgen.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace helm {

inline constexpr int kModelFormatVersion = 1;

/// What a model file holds: the trained ensemble, the names of the input
/// columns it was trained on and, once calibrated, the detector threshold.
struct StoredModel {
    Ensemble ensemble;
    std::vector<std::string> input_columns;
    std::optional<DetectorConfig> detector;
};

std::string model_to_json(const StoredModel& model);
StoredModel model_from_json(const std::string& text);

void save_model(const std::filesystem::path& path, const StoredModel& model);
StoredModel load_model(const std::filesystem::path& path);

/// Provenance sidecar of a generated dataset.
std::string provenance_to_json(const Provenance& provenance);
Provenance provenance_from_json(const std::string& text);

}  // namespace helm
