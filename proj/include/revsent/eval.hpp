#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "revsent/corpus.hpp"
#include "revsent/error.hpp"

namespace revsent::eval {

/// Positive sentiment is the "positive" class of the matrix.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

inline ConfusionMatrix confusion(std::span<const Sentiment> predictions, std::span<const Sentiment> truths) {
    if (predictions.size() != truths.size())
        throw ValidationError("predictions (" + std::to_string(predictions.size()) + ") and truths (" +
                              std::to_string(truths.size()) + ") differ in length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool p = predictions[i] == Sentiment::Positive;
        const bool t = truths[i] == Sentiment::Positive;
        if (p && t) ++cm.tp;
        else if (p) ++cm.fp;
        else if (t) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

/// (TP + TN) / (TP + FP + FN + TN).
inline double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw ValidationError("accuracy of an empty confusion matrix");
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

struct PrecisionRecallF1 {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// F1 from precision and recall; 0 when both are 0.
inline double f1_score(double precision, double recall) {
    return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

inline PrecisionRecallF1 precision_recall_f1(const ConfusionMatrix& cm) {
    PrecisionRecallF1 r;
    if (cm.tp + cm.fp) r.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    if (cm.tp + cm.fn) r.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    r.f1 = f1_score(r.precision, r.recall);
    return r;
}

/// The same metrics with Negative treated as the class of interest.
inline PrecisionRecallF1 minority_precision_recall_f1(const ConfusionMatrix& cm) {
    return precision_recall_f1(ConfusionMatrix{cm.tn, cm.fn, cm.fp, cm.tp});
}

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    bool operator==(const RocPoint&) const = default;
};

using RocCurve = std::vector<RocPoint>;

/// Sweeps thresholds over the distinct scores in descending order. Tied
/// scores move together, so a tie group containing both classes yields a
/// diagonal segment. Starts at (0,0) and ends at (1,1).
inline RocCurve roc_curve(std::span<const double> scores, std::span<const Sentiment> truths) {
    if (scores.size() != truths.size()) throw ValidationError("scores and truths differ in length");
    std::size_t pos = 0, neg = 0;
    for (auto t : truths) (t == Sentiment::Positive ? pos : neg)++;
    if (pos == 0 || neg == 0) throw ValidationError("ROC needs at least one example of each class");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve{{0.0, 0.0}};
    std::size_t tp = 0, fp = 0;
    for (std::size_t k = 0; k < order.size();) {
        const double s = scores[order[k]];
        while (k < order.size() && scores[order[k]] == s) {
            (truths[order[k]] == Sentiment::Positive ? tp : fp)++;
            ++k;
        }
        curve.push_back({static_cast<double>(fp) / static_cast<double>(neg), static_cast<double>(tp) / static_cast<double>(pos)});
    }
    return curve;
}

/// Trapezoidal area under the curve.
inline double auc(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t k = 1; k < curve.size(); ++k)
        area += (curve[k].fpr - curve[k - 1].fpr) * (curve[k].tpr + curve[k - 1].tpr) * 0.5;
    return area;
}

struct MetricsReport {
    std::string model;
    std::string config_fingerprint;
    ConfusionMatrix confusion;
    double accuracy = 0.0;
    PrecisionRecallF1 positive;  // precision / recall / f1 of the Positive class
    PrecisionRecallF1 minority;  // the same for the Negative class
    double auc = 0.0;
    std::size_t test_size = 0;
    std::size_t train_size = 0;
    std::size_t synthetic_samples = 0;
};

inline MetricsReport make_report(std::span<const Sentiment> predictions, std::span<const double> scores,
                                 std::span<const Sentiment> truths) {
    MetricsReport r;
    r.confusion = confusion(predictions, truths);
    r.accuracy = accuracy(r.confusion);
    r.positive = precision_recall_f1(r.confusion);
    r.minority = minority_precision_recall_f1(r.confusion);
    r.auc = auc(roc_curve(scores, truths));
    r.test_size = truths.size();
    return r;
}

}  // namespace revsent::eval
