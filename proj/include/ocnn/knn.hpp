#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ocnn/errors.hpp"
#include "ocnn/matrix.hpp"

namespace ocnn {

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DimensionError("euclidean_distance: lengths " + std::to_string(a.size()) +
                             " and " + std::to_string(b.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

/// k nearest rows of a matrix: indices plus distances, sorted by distance,
/// ties broken by the smaller row index. Never contains the excluded index.
struct NeighbourResult {
    std::vector<std::size_t> indices;
    std::vector<double> distances;
};

/// Brute-force linear-scan nearest-neighbour search. This is the reference
/// implementation; deterministic by construction (stable distance/index
/// ordering, no reordering of the input).
inline NeighbourResult knn_query(const FeatureMatrix& data, std::span<const double> query,
                                 std::size_t k, std::optional<std::size_t> exclude = {}) {
    const std::size_t n = data.rows();
    const std::size_t available = exclude ? n - 1 : n;
    if (k < 1 || k > available)
        throw ParameterError("knn_query: k=" + std::to_string(k) + " out of range for " +
                             std::to_string(available) + " candidate rows");

    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(available);
    for (std::size_t i = 0; i < n; ++i) {
        if (exclude && *exclude == i) continue;
        order.emplace_back(euclidean_distance(data.row(i), query), i);
    }
    // pair comparison = distance first, then row index: the tie-break rule
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end());

    NeighbourResult result;
    result.indices.reserve(k);
    result.distances.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        result.distances.push_back(order[i].first);
        result.indices.push_back(order[i].second);
    }
    return result;
}

} // namespace ocnn
