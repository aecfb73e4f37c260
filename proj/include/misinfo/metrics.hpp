#pragma once

#include <cstddef>
#include <span>

#include "misinfo/common.hpp"

namespace misinfo::eval {

// Positive class = fake = 1.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
    double precision = 0.0;
    double accuracy = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

inline ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size())
        throw ValidationError("confusion: label vectors differ in length");
    if (y_true.empty()) throw ValidationError("confusion: empty label vectors");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1) {
            if (y_pred[i] == 1) ++cm.tp;
            else ++cm.fn;
        } else {
            if (y_pred[i] == 1) ++cm.fp;
            else ++cm.tn;
        }
    }
    return cm;
}

// precision = TP/(TP+FP), recall = TP/(TP+FN), accuracy = (TP+TN)/total,
// F1 = harmonic mean of precision and recall. 0/0 cases yield 0.
inline Metrics metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw ValidationError("metrics: empty confusion matrix");
    Metrics m;
    const auto tp = static_cast<double>(cm.tp);
    m.precision = (cm.tp + cm.fp) ? tp / static_cast<double>(cm.tp + cm.fp) : 0.0;
    m.recall = (cm.tp + cm.fn) ? tp / static_cast<double>(cm.tp + cm.fn) : 0.0;
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

enum class Metric { f1, recall };

inline double metric_value(const Metrics& m, Metric which) {
    return which == Metric::f1 ? m.f1 : m.recall;
}

}  // namespace misinfo::eval
