#pragma once

#include "helm/detector.hpp"

#include <optional>
#include <span>
#include <vector>

namespace helm {

/// Detection rates for one healthy segment against one faulty segment.
///
/// TP and FP are proportions of points, so with N = 1:
/// accuracy = (TPR + TNR) / 2, precision = TPR / (TPR + FPR),
/// f1 = 2 TPR / (1 + FPR + TPR).
struct Rates {
    double tpr = 0.0;
    double fpr = 0.0;
    double tnr = 1.0;
    double fnr = 1.0;
    double accuracy = 0.5;
    double precision = 0.0;  // 0 when nothing is flagged
    double f1 = 0.0;
};

/// All derived rates from a (TPR, FPR) pair.
Rates rates_from(double tpr, double fpr);

/// Fraction of labels that are abnormal.
double flag_rate(std::span<const Label> labels);
double flag_rate(std::span<const Detection> detections);

/// FPR from healthy-segment labels, TPR from fault-segment labels.
Rates score_rates(std::span<const Label> healthy, std::span<const Label> fault);

/// Mean magnification over detections flagged abnormal; empty if none.
std::optional<double> mean_true_positive_magnification(std::span<const Detection> fault);

std::vector<Label> labels_of(std::span<const Detection> detections);

}  // namespace helm
