#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ocnn/classifier.hpp"
#include "ocnn/errors.hpp"

namespace ocnn {

enum class Label { target, outlier };

/// Binary confusion counts with the target class as positive.
struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;

    static ConfusionCounts from_decisions(const std::vector<Decision>& decisions,
                                          const std::vector<Label>& labels) {
        if (decisions.size() != labels.size())
            throw DimensionError("ConfusionCounts: decision/label count mismatch");
        ConfusionCounts c;
        for (std::size_t i = 0; i < decisions.size(); ++i) {
            const bool accepted = decisions[i] == Decision::accept;
            if (labels[i] == Label::target)
                accepted ? ++c.tp : ++c.fn;
            else
                accepted ? ++c.fp : ++c.tn;
        }
        return c;
    }

    std::size_t positives() const { return tp + fn; }
    std::size_t negatives() const { return tn + fp; }
    double tpr() const { return static_cast<double>(tp) / static_cast<double>(positives()); }
    double tnr() const { return static_cast<double>(tn) / static_cast<double>(negatives()); }
};

/// Geometric mean of the per-class accuracies, sqrt(TPR * TNR).
inline double gmean(const ConfusionCounts& c) {
    if (c.positives() == 0 || c.negatives() == 0)
        throw MetricError("gmean: a class is absent from the test rows");
    return std::sqrt(c.tpr() * c.tnr());
}

} // namespace ocnn
