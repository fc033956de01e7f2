#pragma once

#include "helm/core_types.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace helm {

inline constexpr double kDefaultPercentile = 99.5;

/// Threshold on the residual |1 - Y|. `threshold` is 0 until calibrated.
struct DetectorConfig {
    double gamma = 1.5;
    double p = kDefaultPercentile;
    double threshold = 0.0;

    bool calibrated() const { return threshold > 0.0; }
};

enum class Label : int { healthy = 1, abnormal = -1 };

struct Detection {
    double score = 0.0;          // |1 - Y|
    Label label = Label::healthy;
    double magnification = 0.0;  // score / threshold
};

/// Residuals |1 - y_i|.
Vector residuals(const VectorRef& y);

/// p-th percentile (0 < p <= 100) by linear interpolation between order
/// statistics: rank (p / 100) * (n - 1) over the sorted values.
double percentile(std::span<const double> values, double p);

/// threshold = gamma * percentile_p(|1 - Y_val|).
DetectorConfig calibrate(const VectorRef& y_val, double gamma, double p = kDefaultPercentile);

/// Same detector with a different gamma; the percentile is recovered from
/// the stored threshold, so no validation data is needed.
DetectorConfig rescale(const DetectorConfig& config, double gamma);

/// Z_i = sgn(threshold - |1 - Y_i|) with sgn(0) = +1.
std::vector<Detection> decide(const VectorRef& y_test, const DetectorConfig& config);

/// CSV with columns index, score, label, magnification.
void write_detections_csv(std::ostream& out, std::span<const Detection> detections);
void write_detections_csv(const std::filesystem::path& path,
                          std::span<const Detection> detections);

}  // namespace helm
