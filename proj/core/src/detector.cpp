#include "helm/detector.hpp"

#include "helm/csv.hpp"
#include "helm/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <vector>

namespace helm {

Vector residuals(const VectorRef& y) { return (1.0 - y.array()).abs().matrix(); }

double percentile(std::span<const double> values, double p) {
    if (values.empty()) throw InvalidArgument("percentile: empty input");
    if (!(p > 0.0 && p <= 100.0)) {
        throw InvalidArgument("percentile: p must lie in (0, 100]");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double rank = (p / 100.0) * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

DetectorConfig calibrate(const VectorRef& y_val, double gamma, double p) {
    if (y_val.size() == 0) throw InvalidArgument("calibrate: empty validation vector");
    if (y_val.size() < 2) throw InvalidArgument("calibrate: need at least 2 validation outputs");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InvalidArgument("calibrate: gamma must be > 0");
    }
    require_finite(y_val, "calibrate");
    const Vector r = residuals(y_val);
    DetectorConfig config;
    config.gamma = gamma;
    config.p = p;
    config.threshold = gamma * percentile(std::span<const double>(r.data(), r.size()), p);
    if (!(config.threshold > 0.0)) {
        throw NumericalError("calibrate: validation residuals are all zero, threshold would be 0");
    }
    return config;
}

DetectorConfig rescale(const DetectorConfig& config, double gamma) {
    if (!config.calibrated()) throw InvalidArgument("uncalibrated detector");
    if (!(gamma > 0.0)) throw InvalidArgument("rescale: gamma must be > 0");
    DetectorConfig out = config;
    out.threshold = config.threshold / config.gamma * gamma;
    out.gamma = gamma;
    return out;
}

std::vector<Detection> decide(const VectorRef& y_test, const DetectorConfig& config) {
    if (!config.calibrated()) throw InvalidArgument("uncalibrated detector: threshold <= 0");
    std::vector<Detection> out;
    out.reserve(static_cast<std::size_t>(y_test.size()));
    for (Eigen::Index i = 0; i < y_test.size(); ++i) {
        Detection d;
        d.score = std::abs(1.0 - y_test[i]);
        d.label = d.score <= config.threshold ? Label::healthy : Label::abnormal;
        d.magnification = d.score / config.threshold;
        out.push_back(d);
    }
    return out;
}

void write_detections_csv(std::ostream& out, std::span<const Detection> detections) {
    out << "index,score,label,magnification\n";
    std::size_t index = 0;
    for (const auto& d : detections) {
        out << index++ << ',' << format_double(d.score) << ',' << static_cast<int>(d.label) << ','
            << format_double(d.magnification) << '\n';
    }
}

void write_detections_csv(const std::filesystem::path& path,
                          std::span<const Detection> detections) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_detections_csv(out, detections);
}

}  // namespace helm
