#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "ocnn/errors.hpp"
#include "ocnn/knn.hpp"
#include "ocnn/matrix.hpp"
#include "ocnn/metrics.hpp"
#include "ocnn/noise_filter.hpp"
#include "ocnn/random.hpp"

namespace ocnn {

/// Fold assignment for the inner cross-validation: one fold id per retained
/// row and per rejected row (aligned with NoiseSplit::retained/rejected).
/// Built by seeded shuffle + round-robin dealing, so every fold holds at
/// least one row of each kind whenever the preconditions hold.
struct InnerCvPlan {
    std::size_t folds = 2;
    std::vector<std::size_t> target_fold;
    std::vector<std::size_t> noise_fold;
};

struct JkGrid {
    std::size_t j_max = 10;
    std::size_t k_max = 10;
};

struct JkChoice {
    std::size_t j = 1;
    std::size_t k = 1;
};

struct ThetaChoice {
    double theta = 1.0;
};

/// Result of parameter optimisation: either a (J, K) pair for the theta=1
/// scorer or an empirical threshold for the J=K=1 scorer, never both.
struct TunedParams {
    std::variant<JkChoice, ThetaChoice> choice;
    double achieved_gmean = 0.0;

    bool is_jk() const { return std::holds_alternative<JkChoice>(choice); }
    const JkChoice& jk() const { return std::get<JkChoice>(choice); }
    const ThetaChoice& theta() const { return std::get<ThetaChoice>(choice); }
};

inline InnerCvPlan make_inner_plan(const NoiseSplit& split, std::size_t folds, RandomStream stream) {
    if (folds < 2) throw PlanError("make_inner_plan: need at least 2 folds");
    if (split.retained.size() < folds)
        throw PlanError("make_inner_plan: only " + std::to_string(split.retained.size()) +
                        " retained targets for " + std::to_string(folds) + " folds");
    if (split.rejected.size() < folds)
        throw PlanError("make_inner_plan: only " + std::to_string(split.rejected.size()) +
                        " rejected noise rows for " + std::to_string(folds) + " folds");

    InnerCvPlan plan;
    plan.folds = folds;
    auto deal = [&](std::size_t count) {
        std::vector<std::size_t> order(count);
        for (std::size_t i = 0; i < count; ++i) order[i] = i;
        stream.shuffle(order);
        std::vector<std::size_t> fold(count);
        for (std::size_t pos = 0; pos < count; ++pos) fold[order[pos]] = pos % folds;
        return fold;
    };
    plan.target_fold = deal(split.retained.size());
    plan.noise_fold = deal(split.rejected.size());
    return plan;
}

namespace detail {

/// Per-fold distance tables shared by the grid search and the threshold
/// search: the model's neighbour pool is the other folds' retained rows
/// (optionally plus their noise rows, the literal Algorithm reading), the
/// validation set is this fold's retained + rejected rows.
struct InnerFoldTables {
    std::size_t train_size = 0;
    // per validation row: distances to the inner training rows, ascending,
    // ties by training-row position; parallel index array
    std::vector<std::vector<double>> val_dist;
    std::vector<std::vector<std::size_t>> val_nn;
    std::vector<Label> val_label;
    // per inner training row: ascending distances to the other training rows
    std::vector<std::vector<double>> train_self_dist;
};

inline InnerFoldTables build_fold_tables(const FeatureMatrix& train, const NoiseSplit& split,
                                         const InnerCvPlan& plan, std::size_t fold,
                                         bool include_noise_in_inner_train) {
    std::vector<std::size_t> inner_rows;
    std::vector<std::size_t> val_rows;
    std::vector<Label> val_labels;
    for (std::size_t i = 0; i < split.retained.size(); ++i) {
        (plan.target_fold[i] == fold ? val_rows : inner_rows).push_back(split.retained[i]);
        if (plan.target_fold[i] == fold) val_labels.push_back(Label::target);
    }
    for (std::size_t i = 0; i < split.rejected.size(); ++i) {
        if (plan.noise_fold[i] == fold) {
            val_rows.push_back(split.rejected[i]);
            val_labels.push_back(Label::outlier);
        } else if (include_noise_in_inner_train) {
            inner_rows.push_back(split.rejected[i]);
        }
    }

    InnerFoldTables t;
    t.train_size = inner_rows.size();
    t.val_label = std::move(val_labels);

    const FeatureMatrix inner = train.select_rows(inner_rows);
    std::vector<std::pair<double, std::size_t>> order(inner.rows());

    t.val_dist.reserve(val_rows.size());
    t.val_nn.reserve(val_rows.size());
    for (std::size_t v : val_rows) {
        for (std::size_t r = 0; r < inner.rows(); ++r)
            order[r] = {euclidean_distance(inner.row(r), train.row(v)), r};
        std::sort(order.begin(), order.end());
        std::vector<double> d(order.size());
        std::vector<std::size_t> idx(order.size());
        for (std::size_t r = 0; r < order.size(); ++r) {
            d[r] = order[r].first;
            idx[r] = order[r].second;
        }
        t.val_dist.push_back(std::move(d));
        t.val_nn.push_back(std::move(idx));
    }

    t.train_self_dist.reserve(inner.rows());
    for (std::size_t r = 0; r < inner.rows(); ++r) {
        std::vector<std::pair<double, std::size_t>> self;
        self.reserve(inner.rows() - 1);
        for (std::size_t s = 0; s < inner.rows(); ++s)
            if (s != r) self.emplace_back(euclidean_distance(inner.row(s), inner.row(r)), s);
        std::sort(self.begin(), self.end());
        std::vector<double> d(self.size());
        for (std::size_t s = 0; s < self.size(); ++s) d[s] = self[s].first;
        t.train_self_dist.push_back(std::move(d));
    }
    return t;
}

inline double ratio_from_means(double dbar_j, double dbar_k) {
    if (dbar_k > 0.0) return dbar_j / dbar_k;
    return dbar_j == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

/// Mean of the first k ascending self-distances of training row r.
inline double kmean(const InnerFoldTables& t, std::size_t r, std::size_t k) {
    const auto& d = t.train_self_dist[r];
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += d[i];
    return sum / static_cast<double>(k);
}

} // namespace detail

/// Grid search for the best (J, K) at theta = 1 over the inner folds.
/// Selection: the pair with the largest fold-averaged gmean, ties broken by
/// smaller J then smaller K.
inline TunedParams optimise_jk(const FeatureMatrix& train, const NoiseSplit& split,
                               const InnerCvPlan& plan, const JkGrid& grid,
                               bool include_noise_in_inner_train = false) {
    if (grid.j_max < 1 || grid.k_max < 1) throw ParameterError("optimise_jk: empty grid");

    std::vector<detail::InnerFoldTables> tables;
    tables.reserve(plan.folds);
    for (std::size_t g = 0; g < plan.folds; ++g) {
        tables.push_back(detail::build_fold_tables(train, split, plan, g, include_noise_in_inner_train));
        const std::size_t n = tables.back().train_size;
        if (grid.j_max > n || grid.k_max > n - 1)
            throw ParameterError("optimise_jk: grid exceeds inner training set of " +
                                 std::to_string(n) + " rows");
    }

    JkChoice best;
    double best_gmean = -1.0;
    for (std::size_t j = 1; j <= grid.j_max; ++j) {
        for (std::size_t k = 1; k <= grid.k_max; ++k) {
            double gmean_sum = 0.0;
            for (const auto& t : tables) {
                std::vector<Decision> decisions;
                decisions.reserve(t.val_label.size());
                for (std::size_t v = 0; v < t.val_label.size(); ++v) {
                    double sum_j = 0.0;
                    double sum_k = 0.0;
                    for (std::size_t i = 0; i < j; ++i) {
                        sum_j += t.val_dist[v][i];
                        sum_k += detail::kmean(t, t.val_nn[v][i], k);
                    }
                    const double ratio = detail::ratio_from_means(
                        sum_j / static_cast<double>(j), sum_k / static_cast<double>(j));
                    decisions.push_back(ratio < 1.0 ? Decision::accept : Decision::reject);
                }
                gmean_sum += gmean(ConfusionCounts::from_decisions(decisions, t.val_label));
            }
            const double avg = gmean_sum / static_cast<double>(plan.folds);
            if (avg > best_gmean) {
                best_gmean = avg;
                best = {j, k};
            }
        }
    }
    return TunedParams{best, best_gmean};
}

/// Empirical-threshold search for the J=K=1 scorer: every validation row's
/// ratio is a candidate threshold; the candidate with the largest gmean over
/// the pooled rows wins, ties broken by the largest threshold.
inline TunedParams optimise_theta(const FeatureMatrix& train, const NoiseSplit& split,
                                  const InnerCvPlan& plan,
                                  bool include_noise_in_inner_train = false) {
    std::vector<double> ratios;
    std::vector<Label> labels;
    for (std::size_t g = 0; g < plan.folds; ++g) {
        const auto t = detail::build_fold_tables(train, split, plan, g, include_noise_in_inner_train);
        if (t.train_size < 2)
            throw PlanError("optimise_theta: inner training set needs at least 2 rows");
        for (std::size_t v = 0; v < t.val_label.size(); ++v) {
            const double d1 = t.val_dist[v][0];
            const double e1 = t.train_self_dist[t.val_nn[v][0]][0];
            ratios.push_back(detail::ratio_from_means(d1, e1));
            labels.push_back(t.val_label[v]);
        }
    }

    double best_tau = 0.0;
    double best_gmean = -1.0;
    for (double tau : ratios) {
        ConfusionCounts c;
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            const bool accepted = ratios[i] < tau;
            if (labels[i] == Label::target)
                accepted ? ++c.tp : ++c.fn;
            else
                accepted ? ++c.fp : ++c.tn;
        }
        const double g = gmean(c);
        if (g > best_gmean || (g == best_gmean && tau > best_tau)) {
            best_gmean = g;
            best_tau = tau;
        }
    }
    return TunedParams{ThetaChoice{best_tau}, best_gmean};
}

} // namespace ocnn
