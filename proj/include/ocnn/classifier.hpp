#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ocnn/errors.hpp"
#include "ocnn/knn.hpp"
#include "ocnn/matrix.hpp"
#include "ocnn/normalize.hpp"

namespace ocnn {

/// Parameters of the unified scorer. The four named variants are presets
/// over one code path: 11NN (J=K=1), 1KNN (J=1), J1NN (K=1), JKNN (general).
struct OcnnParams {
    std::size_t j = 1;
    std::size_t k = 1;
    double theta = 1.0;

    static OcnnParams nn11(double theta = 1.0) { return {1, 1, theta}; }
    static OcnnParams nn1k(std::size_t k, double theta = 1.0) { return {1, k, theta}; }
    static OcnnParams nnj1(std::size_t j, double theta = 1.0) { return {j, 1, theta}; }
    static OcnnParams jknn(std::size_t j, std::size_t k, double theta = 1.0) { return {j, k, theta}; }
};

/// The two averaged distances of the scorer and their ratio.
/// Conventions for a zero denominator: both zero -> ratio 0, positive
/// numerator -> +infinity. Keeps classification total.
struct OcnnScore {
    double dbar_j = 0.0;
    double dbar_k = 0.0;
    double ratio = 0.0;
};

enum class Decision { accept, reject };

/// Frozen training matrix plus parameters; produces accept/reject decisions.
///
/// The query's J nearest training rows give the mean distance dbar_j; each of
/// those rows contributes the mean distance to its own K nearest training
/// rows (itself excluded, duplicates allowed), averaged into dbar_k. A query
/// is accepted as a target iff dbar_j / dbar_k < theta, strictly.
///
/// Immutable and shareable across threads; score/classify are pure.
class OcnnModel {
public:
    OcnnModel(FeatureMatrix train, OcnnParams params, NormalizationParams norm)
        : train_(std::move(train)), params_(params), norm_(std::move(norm)) {
        const std::size_t n = train_.rows();
        if (n == 0) throw ParameterError("OcnnModel: empty training matrix");
        if (params_.j < 1 || params_.j > n)
            throw ParameterError("OcnnModel: J=" + std::to_string(params_.j) +
                                 " out of range for " + std::to_string(n) + " training rows");
        if (params_.k < 1 || params_.k > n - 1)
            throw ParameterError("OcnnModel: K=" + std::to_string(params_.k) +
                                 " out of range for " + std::to_string(n) + " training rows");
        if (!(params_.theta > 0)) throw ParameterError("OcnnModel: theta must be positive");

        // Each training row's mean distance to its K nearest neighbours is a
        // fixed property of the matrix; precompute it once.
        row_kmean_.reserve(n);
        for (std::size_t r = 0; r < n; ++r) {
            const NeighbourResult nn = knn_query(train_, train_.row(r), params_.k, r);
            double sum = 0.0;
            for (double d : nn.distances) sum += d;
            row_kmean_.push_back(sum / static_cast<double>(params_.k));
        }
    }

    const FeatureMatrix& train() const { return train_; }
    const OcnnParams& params() const { return params_; }
    const NormalizationParams& norm() const { return norm_; }

    OcnnScore score(std::span<const double> z) const {
        const NeighbourResult nn = knn_query(train_, z, params_.j);
        double sum_j = 0.0;
        double sum_k = 0.0;
        for (std::size_t i = 0; i < params_.j; ++i) {
            sum_j += nn.distances[i];
            sum_k += row_kmean_[nn.indices[i]];
        }
        OcnnScore s;
        s.dbar_j = sum_j / static_cast<double>(params_.j);
        s.dbar_k = sum_k / static_cast<double>(params_.j);
        if (s.dbar_k > 0.0)
            s.ratio = s.dbar_j / s.dbar_k;
        else
            s.ratio = s.dbar_j == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return s;
    }

    Decision classify(std::span<const double> z) const {
        // IEEE comparisons realise all conventions: ratio 0 accepts for any
        // theta > 0, +infinity and ratio == theta reject.
        return score(z).ratio < params_.theta ? Decision::accept : Decision::reject;
    }

    std::vector<Decision> classify_batch(const FeatureMatrix& queries) const {
        std::vector<Decision> out;
        out.reserve(queries.rows());
        for (std::size_t i = 0; i < queries.rows(); ++i) out.push_back(classify(queries.row(i)));
        return out;
    }

private:
    FeatureMatrix train_;
    OcnnParams params_;
    NormalizationParams norm_;
    std::vector<double> row_kmean_;
};

} // namespace ocnn
