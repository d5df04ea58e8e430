#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ocnn/classifier.hpp"
#include "ocnn/config.hpp"
#include "ocnn/dataset.hpp"
#include "ocnn/ensemble.hpp"
#include "ocnn/errors.hpp"
#include "ocnn/metrics.hpp"
#include "ocnn/noise_filter.hpp"
#include "ocnn/normalize.hpp"
#include "ocnn/parallel.hpp"
#include "ocnn/random.hpp"
#include "ocnn/tuning.hpp"

namespace ocnn {

/// Outer fold assignment: positives and negatives are shuffled separately
/// and dealt round-robin, so every fold holds both classes whenever each
/// class has at least F rows.
struct FoldPlan {
    std::size_t folds = 5;
    std::vector<std::size_t> fold_of_row;
};

inline FoldPlan make_fold_plan(const std::vector<Label>& labels, std::size_t folds,
                               RandomStream stream) {
    if (folds < 1) throw ParameterError("make_fold_plan: need at least one fold");
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == Label::target ? positives : negatives).push_back(i);
    if (positives.size() < folds)
        throw PlanError("make_fold_plan: only " + std::to_string(positives.size()) +
                        " target rows for " + std::to_string(folds) + " folds");
    if (negatives.size() < folds)
        throw PlanError("make_fold_plan: only " + std::to_string(negatives.size()) +
                        " outlier rows for " + std::to_string(folds) + " folds");

    FoldPlan plan;
    plan.folds = folds;
    plan.fold_of_row.assign(labels.size(), 0);
    auto deal = [&](std::vector<std::size_t>& rows) {
        stream.shuffle(rows);
        for (std::size_t pos = 0; pos < rows.size(); ++pos)
            plan.fold_of_row[rows[pos]] = pos % folds;
    };
    deal(positives);
    deal(negatives);
    return plan;
}

/// Metrics of one outer fold plus the audit trail: which omega values the
/// IQR filter settled on (one per trained model) and what tuning chose.
struct FoldResult {
    std::size_t fold = 0;
    ConfusionCounts counts;
    double tpr = 0.0;
    double tnr = 0.0;
    double gmean_value = 0.0;
    std::vector<double> omegas_used;
    std::string tuned;
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;
};

/// Per-fold and aggregated results plus the full configuration fingerprint.
struct EvalReport {
    std::string dataset_name;
    std::string dataset_path;
    std::string dataset_format;
    std::string target_class;
    ExperimentConfig config;
    std::vector<FoldResult> folds;
    Aggregate tpr;
    Aggregate tnr;
    Aggregate gmean_agg;
};

namespace detail {

inline TuningMode tuning_for(ClassifierMode mode) {
    switch (mode) {
        case ClassifierMode::nn11: return TuningMode::none_theta1;
        case ClassifierMode::nn11_theta: return TuningMode::theta;
        case ClassifierMode::jknn: return TuningMode::jk_grid;
    }
    throw ParameterError("unknown classifier mode");
}

inline IqrConfig iqr_from(const ExperimentConfig& cfg) {
    IqrConfig iqr;
    iqr.omega = cfg.omega;
    iqr.min_rejected = cfg.min_rejected;
    iqr.omega_decay = cfg.omega_decay;
    iqr.omega_floor = cfg.omega_floor;
    iqr.lower_fence = cfg.lower_fence;
    return iqr;
}

inline std::string describe(const TunedParams& tuned) {
    if (tuned.is_jk())
        return "J=" + std::to_string(tuned.jk().j) + " K=" + std::to_string(tuned.jk().k);
    return "theta=" + format_double(tuned.theta().theta);
}

} // namespace detail

/// Evaluate one outer fold: fit min-max on the training targets, normalize
/// both sets, train the configured pipeline, classify the test rows.
inline FoldResult run_fold(const FeatureMatrix& train_targets, const FeatureMatrix& test,
                           const std::vector<Label>& test_labels, const ExperimentConfig& cfg,
                           RandomStream fold_stream) {
    if (test.rows() != test_labels.size())
        throw DimensionError("run_fold: test rows and labels differ");
    bool has_target = false;
    bool has_outlier = false;
    for (Label l : test_labels) (l == Label::target ? has_target : has_outlier) = true;
    if (!has_target || !has_outlier)
        throw MetricError("run_fold: test fold must contain both classes");

    const NormalizationParams norm = fit_minmax(train_targets);
    const FeatureMatrix ntrain = apply_minmax(norm, train_targets);
    const FeatureMatrix ntest = apply_minmax(norm, test);

    const IqrConfig iqr = detail::iqr_from(cfg);
    const JkGrid grid{cfg.j_max, cfg.k_max};

    FoldResult result;
    std::vector<Decision> decisions;

    if (cfg.ensemble == EnsembleChoice::single) {
        if (cfg.classifier == ClassifierMode::nn11) {
            const OcnnModel model(ntrain, OcnnParams::nn11(), norm);
            decisions = model.classify_batch(ntest);
        } else {
            IqrConfig effective = iqr;
            effective.min_rejected = std::max<std::size_t>(iqr.min_rejected, cfg.inner_folds);
            const NoiseSplit split = iqr_reject(ntrain, effective);
            const InnerCvPlan plan =
                make_inner_plan(split, cfg.inner_folds, fold_stream.derive(0));
            const TunedParams tuned = cfg.classifier == ClassifierMode::jknn
                ? optimise_jk(ntrain, split, plan, grid, cfg.include_noise_in_inner_train)
                : optimise_theta(ntrain, split, plan, cfg.include_noise_in_inner_train);
            const OcnnParams params = tuned.is_jk()
                ? OcnnParams::jknn(tuned.jk().j, tuned.jk().k)
                : OcnnParams::nn11(tuned.theta().theta);
            const OcnnModel model(ntrain.select_rows(split.retained), params, norm);
            decisions = model.classify_batch(ntest);
            result.omegas_used.push_back(split.omega_used);
            result.tuned = detail::describe(tuned);
        }
    } else {
        EnsembleConfig ecfg;
        ecfg.members = cfg.members;
        ecfg.mode = cfg.ensemble == EnsembleChoice::rs50   ? EnsembleMode::rs50
                    : cfg.ensemble == EnsembleChoice::rs75 ? EnsembleMode::rs75
                                                           : EnsembleMode::rp;
        ecfg.tuning = detail::tuning_for(cfg.classifier);
        ecfg.projected_dims = cfg.projected_dims;
        ecfg.inner_folds = cfg.inner_folds;
        ecfg.member_scaling = cfg.member_scaling == "none"      ? MemberScaling::none
                              : cfg.member_scaling == "clamped" ? MemberScaling::clamped
                                                                : MemberScaling::linear;
        ecfg.normalize_rp_rows = cfg.normalize_rp_rows;
        ecfg.include_noise_in_inner_train = cfg.include_noise_in_inner_train;
        ecfg.threads = cfg.threads;
        const EnsembleModel ensemble =
            train_ensemble(ntrain, ecfg, iqr, grid, fold_stream.derive(1));
        decisions = predict_majority(ensemble, ntest, cfg.threads);
        for (const auto& m : ensemble.members)
            if (!std::isnan(m.omega_used)) result.omegas_used.push_back(m.omega_used);
    }

    result.counts = ConfusionCounts::from_decisions(decisions, test_labels);
    result.tpr = result.counts.tpr();
    result.tnr = result.counts.tnr();
    result.gmean_value = gmean(result.counts);
    return result;
}

/// Observation points for audits; every callback is optional.
struct ExperimentHooks {
    std::function<void(std::size_t fold, const std::vector<std::size_t>& train_rows,
                       const std::vector<std::size_t>& test_rows)>
        on_fold_split;
};

namespace detail {

inline Aggregate aggregate(const std::vector<double>& values) {
    Aggregate a;
    for (double v : values) a.mean += v;
    a.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return a;
}

} // namespace detail

/// The outer protocol: stratified F folds; each fold trains on the other
/// folds' target rows only (their outliers are ignored) and tests on all of
/// its own rows. Folds run independently; randomness flows from
/// (seed, fold id) so serial and parallel execution agree exactly.
inline EvalReport run_experiment(const LabeledDataset& dataset, const ExperimentConfig& cfg,
                                 const ExperimentHooks* hooks = nullptr) {
    if (!cfg.seed) throw ParameterError("run_experiment: a master seed is required");
    if (cfg.folds < 2) throw ParameterError("run_experiment: need at least 2 outer folds");
    if (dataset.features.rows() != dataset.labels.size())
        throw DimensionError("run_experiment: features and labels differ");

    const RandomStream master(*cfg.seed);
    const FoldPlan plan = make_fold_plan(dataset.labels, cfg.folds, master.derive(0));

    EvalReport report;
    report.dataset_name = dataset.name;
    report.dataset_path = dataset.source_path;
    report.dataset_format = dataset.format;
    report.target_class = dataset.target_class;
    report.config = cfg;
    report.folds.resize(cfg.folds);

    std::vector<std::vector<std::size_t>> train_rows(cfg.folds);
    std::vector<std::vector<std::size_t>> test_rows(cfg.folds);
    for (std::size_t i = 0; i < dataset.labels.size(); ++i) {
        for (std::size_t f = 0; f < cfg.folds; ++f) {
            if (plan.fold_of_row[i] == f)
                test_rows[f].push_back(i);
            else if (dataset.labels[i] == Label::target)
                train_rows[f].push_back(i); // outliers of the other folds are ignored
        }
    }
    if (hooks && hooks->on_fold_split)
        for (std::size_t f = 0; f < cfg.folds; ++f)
            hooks->on_fold_split(f, train_rows[f], test_rows[f]);

    parallel_for(cfg.folds, cfg.threads, [&](std::size_t f) {
        try {
            const FeatureMatrix train = dataset.features.select_rows(train_rows[f]);
            const FeatureMatrix test = dataset.features.select_rows(test_rows[f]);
            std::vector<Label> labels;
            labels.reserve(test_rows[f].size());
            for (std::size_t i : test_rows[f]) labels.push_back(dataset.labels[i]);
            report.folds[f] = run_fold(train, test, labels, cfg, master.derive(1 + f));
            report.folds[f].fold = f;
        } catch (const NoiseBudgetError& e) {
            throw NoiseBudgetError("fold " + std::to_string(f) + ": " + e.what());
        } catch (const PlanError& e) {
            throw PlanError("fold " + std::to_string(f) + ": " + e.what());
        } catch (const MetricError& e) {
            throw MetricError("fold " + std::to_string(f) + ": " + e.what());
        }
    });

    std::vector<double> tprs, tnrs, gmeans;
    for (const auto& fr : report.folds) {
        tprs.push_back(fr.tpr);
        tnrs.push_back(fr.tnr);
        gmeans.push_back(fr.gmean_value);
    }
    report.tpr = detail::aggregate(tprs);
    report.tnr = detail::aggregate(tnrs);
    report.gmean_agg = detail::aggregate(gmeans);
    return report;
}

} // namespace ocnn
