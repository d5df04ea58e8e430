#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ocnn/errors.hpp"
#include "ocnn/knn.hpp"
#include "ocnn/matrix.hpp"

namespace ocnn {

/// IQR fence configuration. omega is the rejection rate: smaller values
/// tighten the fences and reject more rows. When fewer than min_rejected
/// rows fall outside the fences, omega decays geometrically until either
/// enough rows are rejected or it would drop below omega_floor.
struct IqrConfig {
    double omega = 1.5;
    std::size_t min_rejected = 5;
    double omega_decay = 0.9;
    double omega_floor = 0.05;
    bool lower_fence = true;
};

/// Partition of training targets into retained rows and rejected
/// proxy-negatives, plus the omega value that produced it.
struct NoiseSplit {
    std::vector<std::size_t> retained;
    std::vector<std::size_t> rejected;
    double omega_used = 0.0;
};

/// Columnwise arithmetic mean of the training rows.
inline std::vector<double> class_center(const FeatureMatrix& train) {
    if (train.rows() == 0) throw ParameterError("class_center: empty matrix");
    std::vector<double> center(train.cols(), 0.0);
    for (std::size_t i = 0; i < train.rows(); ++i) {
        const auto r = train.row(i);
        for (std::size_t j = 0; j < train.cols(); ++j) center[j] += r[j];
    }
    for (double& c : center) c /= static_cast<double>(train.rows());
    return center;
}

/// Linear-interpolation quantile: sorted values, position p = q*(m-1),
/// interpolate between the bracketing order statistics.
inline double quartile(std::span<const double> values, double q) {
    if (values.empty()) throw ParameterError("quartile: empty input");
    if (q < 0.0 || q > 1.0) throw ParameterError("quartile: q out of [0, 1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

/// Distance of every training row to the class centre.
inline std::vector<double> center_distances(const FeatureMatrix& train) {
    const std::vector<double> center = class_center(train);
    std::vector<double> dist;
    dist.reserve(train.rows());
    for (std::size_t i = 0; i < train.rows(); ++i)
        dist.push_back(euclidean_distance(center, train.row(i)));
    return dist;
}

/// Reject extreme target observations via centre-distance IQR fencing.
/// A row is noise when its centre distance P satisfies
/// P > Q3 + omega*IQR or (lower fence enabled) P < Q1 - omega*IQR.
/// omega decays until min_rejected rows are rejected; failing that before
/// omega_floor is a noise-budget error.
inline NoiseSplit iqr_reject(const FeatureMatrix& train, const IqrConfig& cfg) {
    if (cfg.min_rejected < 1) throw ParameterError("iqr_reject: min_rejected must be >= 1");
    if (train.rows() < cfg.min_rejected + 1)
        throw ParameterError("iqr_reject: need more than min_rejected rows");
    if (!(cfg.omega > 0) || !(cfg.omega_floor > 0) || cfg.omega < cfg.omega_floor)
        throw ParameterError("iqr_reject: omega must satisfy omega >= omega_floor > 0");
    if (!(cfg.omega_decay > 0) || !(cfg.omega_decay < 1))
        throw ParameterError("iqr_reject: omega_decay must lie in (0, 1)");

    const std::vector<double> dist = center_distances(train);
    const double q1 = quartile(dist, 0.25);
    const double q3 = quartile(dist, 0.75);
    const double iqr = q3 - q1;

    double omega = cfg.omega;
    while (true) {
        NoiseSplit split;
        split.omega_used = omega;
        const double upper = q3 + omega * iqr;
        const double lower = q1 - omega * iqr;
        for (std::size_t i = 0; i < dist.size(); ++i) {
            const bool noisy = dist[i] > upper || (cfg.lower_fence && dist[i] < lower);
            (noisy ? split.rejected : split.retained).push_back(i);
        }
        if (split.rejected.size() >= cfg.min_rejected) return split;
        omega *= cfg.omega_decay;
        if (omega < cfg.omega_floor)
            throw NoiseBudgetError("iqr_reject: cannot reject " + std::to_string(cfg.min_rejected) +
                                   " rows before omega falls below " + std::to_string(cfg.omega_floor));
    }
}

} // namespace ocnn
