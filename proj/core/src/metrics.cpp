#include "helm/metrics.hpp"

#include "helm/error.hpp"

#include <algorithm>

namespace helm {

Rates rates_from(double tpr, double fpr) {
    Rates r;
    r.tpr = tpr;
    r.fpr = fpr;
    r.tnr = 1.0 - fpr;
    r.fnr = 1.0 - tpr;
    r.accuracy = (r.tpr + r.tnr) / 2.0;
    r.precision = (tpr + fpr) > 0.0 ? tpr / (tpr + fpr) : 0.0;
    r.f1 = 2.0 * tpr / (1.0 + fpr + tpr);
    return r;
}

double flag_rate(std::span<const Label> labels) {
    if (labels.empty()) throw InvalidArgument("flag_rate: empty segment");
    const auto flagged = std::count(labels.begin(), labels.end(), Label::abnormal);
    return static_cast<double>(flagged) / static_cast<double>(labels.size());
}

double flag_rate(std::span<const Detection> detections) {
    const auto labels = labels_of(detections);
    return flag_rate(labels);
}

Rates score_rates(std::span<const Label> healthy, std::span<const Label> fault) {
    if (healthy.empty() || fault.empty()) throw InvalidArgument("score_rates: empty segment");
    return rates_from(flag_rate(fault), flag_rate(healthy));
}

std::optional<double> mean_true_positive_magnification(std::span<const Detection> fault) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& d : fault) {
        if (d.label == Label::abnormal) {
            sum += d.magnification;
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

std::vector<Label> labels_of(std::span<const Detection> detections) {
    std::vector<Label> labels;
    labels.reserve(detections.size());
    for (const auto& d : detections) labels.push_back(d.label);
    return labels;
}

}  // namespace helm
