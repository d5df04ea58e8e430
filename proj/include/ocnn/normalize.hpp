#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "ocnn/errors.hpp"
#include "ocnn/matrix.hpp"

namespace ocnn {

/// Per-column min/max fitted from training rows only, never from test rows.
struct NormalizationParams {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t dims() const { return min.size(); }
};

inline NormalizationParams fit_minmax(const FeatureMatrix& train) {
    if (train.rows() == 0) throw ParameterError("fit_minmax: empty training matrix");
    NormalizationParams p;
    p.min.assign(train.row(0).begin(), train.row(0).end());
    p.max = p.min;
    for (std::size_t i = 1; i < train.rows(); ++i) {
        const auto r = train.row(i);
        for (std::size_t j = 0; j < train.cols(); ++j) {
            p.min[j] = std::min(p.min[j], r[j]);
            p.max[j] = std::max(p.max[j], r[j]);
        }
    }
    return p;
}

/// (x - min) / (max - min), clamped into [0, 1] so unseen test extremes keep
/// distances bounded. Constant training columns map to 0 everywhere.
inline double minmax_value(const NormalizationParams& params, std::size_t col, double x) {
    const double lo = params.min[col];
    const double hi = params.max[col];
    if (hi == lo) return 0.0;
    return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
}

inline void apply_minmax_row(const NormalizationParams& params, std::span<const double> in,
                             std::vector<double>& out) {
    if (in.size() != params.dims())
        throw DimensionError("apply_minmax: row width does not match fitted dimensionality");
    out.resize(in.size());
    for (std::size_t j = 0; j < in.size(); ++j) out[j] = minmax_value(params, j, in[j]);
}

inline FeatureMatrix apply_minmax(const NormalizationParams& params, const FeatureMatrix& data) {
    if (data.cols() != params.dims() && data.rows() > 0)
        throw DimensionError("apply_minmax: matrix width does not match fitted dimensionality");
    FeatureMatrix out(params.dims());
    std::vector<double> buf;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        apply_minmax_row(params, data.row(i), buf);
        out.append_row(buf);
    }
    return out;
}

/// The affine part of the min-max map without the [0, 1] clamp; values
/// outside the fitted range keep their distance from it.
inline FeatureMatrix apply_minmax_unclamped(const NormalizationParams& params,
                                            const FeatureMatrix& data) {
    if (data.cols() != params.dims() && data.rows() > 0)
        throw DimensionError("apply_minmax: matrix width does not match fitted dimensionality");
    FeatureMatrix out(params.dims());
    std::vector<double> buf(params.dims());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const auto row = data.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double lo = params.min[j];
            const double hi = params.max[j];
            buf[j] = hi == lo ? 0.0 : (row[j] - lo) / (hi - lo);
        }
        out.append_row(buf);
    }
    return out;
}

} // namespace ocnn
