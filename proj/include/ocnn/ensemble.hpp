#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ocnn/classifier.hpp"
#include "ocnn/errors.hpp"
#include "ocnn/matrix.hpp"
#include "ocnn/noise_filter.hpp"
#include "ocnn/normalize.hpp"
#include "ocnn/parallel.hpp"
#include "ocnn/random.hpp"
#include "ocnn/tuning.hpp"

namespace ocnn {

enum class TransformKind { identity, subspace, projection };

/// A member's view of the feature space: a sorted column subset, a sparse
/// random projection matrix, or the identity.
struct FeatureTransform {
    TransformKind kind = TransformKind::identity;
    std::vector<std::size_t> columns; // subspace
    FeatureMatrix matrix;             // projection, p x d

    static FeatureTransform identity() { return {}; }
};

enum class EnsembleMode { rs50, rs75, rp };
enum class TuningMode { jk_grid, theta, none_theta1 };

/// How each member treats its transformed view. `linear` refits min-max on
/// the member's transformed training targets but keeps the map affine, so a
/// query projecting outside the training range stays outside; `clamped`
/// additionally squashes such queries onto the [0, 1] box (that destroys
/// exactly the signal a random projection creates, so it is not the
/// default); `none` classifies in the raw transformed space.
enum class MemberScaling { none, linear, clamped };

struct EnsembleConfig {
    std::size_t members = 25;
    EnsembleMode mode = EnsembleMode::rp;
    TuningMode tuning = TuningMode::theta;
    std::size_t projected_dims = 0; // 0 keeps the original dimensionality
    std::size_t inner_folds = 2;
    MemberScaling member_scaling = MemberScaling::linear;
    bool normalize_rp_rows = false;
    bool include_noise_in_inner_train = false;
    std::size_t threads = 1;
};

/// Uniform sample of round(fraction * d) distinct columns (at least one),
/// sorted ascending.
inline FeatureTransform sample_subspace(std::size_t dims, double fraction, RandomStream& stream) {
    if (dims < 1) throw ParameterError("sample_subspace: dims must be >= 1");
    if (!(fraction > 0.0) || fraction > 1.0)
        throw ParameterError("sample_subspace: fraction must lie in (0, 1]");
    std::size_t count = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(dims)));
    count = std::min(std::max<std::size_t>(count, 1), dims);

    std::vector<std::size_t> pool(dims);
    for (std::size_t i = 0; i < dims; ++i) pool[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(stream.uniform_below(dims - i));
        std::swap(pool[i], pool[j]);
    }
    FeatureTransform t;
    t.kind = TransformKind::subspace;
    t.columns.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(t.columns.begin(), t.columns.end());
    return t;
}

/// Sparse random projection matrix with i.i.d. entries
/// sqrt(3) * {+1 w.p. 1/6, 0 w.p. 2/3, -1 w.p. 1/6}.
/// Row normalization is off by default: the entry distribution does not
/// produce unit rows, so the formula wins over the prose reading.
inline FeatureTransform generate_rp_matrix(std::size_t p, std::size_t d, RandomStream& stream,
                                           bool normalize_rows = false) {
    if (p < 1 || d < 1) throw ParameterError("generate_rp_matrix: p and d must be >= 1");
    const double root3 = std::sqrt(3.0);
    std::vector<double> values;
    values.reserve(p * d);
    for (std::size_t i = 0; i < p * d; ++i) {
        const std::uint64_t u = stream.uniform_below(6);
        values.push_back(u == 0 ? root3 : (u == 1 ? -root3 : 0.0));
    }
    if (normalize_rows) {
        for (std::size_t r = 0; r < p; ++r) {
            double sq = 0.0;
            for (std::size_t c = 0; c < d; ++c) sq += values[r * d + c] * values[r * d + c];
            if (sq > 0.0) {
                const double inv = 1.0 / std::sqrt(sq);
                for (std::size_t c = 0; c < d; ++c) values[r * d + c] *= inv;
            }
        }
    }
    FeatureTransform t;
    t.kind = TransformKind::projection;
    t.matrix = FeatureMatrix(p, d, std::move(values));
    return t;
}

inline FeatureMatrix apply_transform(const FeatureTransform& t, const FeatureMatrix& data) {
    switch (t.kind) {
        case TransformKind::identity:
            return data;
        case TransformKind::subspace:
            return data.select_cols(t.columns);
        case TransformKind::projection: {
            if (data.rows() > 0 && data.cols() != t.matrix.cols())
                throw DimensionError("apply_transform: projection expects " +
                                     std::to_string(t.matrix.cols()) + " columns, got " +
                                     std::to_string(data.cols()));
            const std::size_t p = t.matrix.rows();
            FeatureMatrix out(p);
            std::vector<double> buf(p);
            for (std::size_t i = 0; i < data.rows(); ++i) {
                const auto x = data.row(i);
                for (std::size_t r = 0; r < p; ++r) {
                    const auto w = t.matrix.row(r);
                    double sum = 0.0;
                    for (std::size_t c = 0; c < w.size(); ++c) sum += w[c] * x[c];
                    buf[r] = sum;
                }
                out.append_row(buf);
            }
            return out;
        }
    }
    throw ParameterError("apply_transform: unknown transform kind");
}

/// One trained ensemble member: its feature transform, its scaling state in
/// the transformed space, the frozen scorer, and what tuning produced.
struct EnsembleMember {
    FeatureTransform transform;
    std::optional<NormalizationParams> view_norm;
    bool view_clamp = false;
    OcnnModel model;
    std::optional<TunedParams> tuned;
    double omega_used = std::numeric_limits<double>::quiet_NaN();

    /// Map original-space rows into this member's model space.
    FeatureMatrix view(const FeatureMatrix& data) const {
        FeatureMatrix transformed = apply_transform(transform, data);
        if (!view_norm) return transformed;
        return view_clamp ? apply_minmax(*view_norm, transformed)
                          : apply_minmax_unclamped(*view_norm, transformed);
    }
};

struct EnsembleModel {
    EnsembleMode mode = EnsembleMode::rp;
    std::vector<EnsembleMember> members;
};

namespace detail {

template <typename Fn>
auto with_member_context(std::size_t index, Fn&& fn) {
    const std::string ctx = "ensemble member " + std::to_string(index) + ": ";
    try {
        return fn();
    } catch (const NoiseBudgetError& e) {
        throw NoiseBudgetError(ctx + e.what());
    } catch (const PlanError& e) {
        throw PlanError(ctx + e.what());
    } catch (const ParameterError& e) {
        throw ParameterError(ctx + e.what());
    } catch (const DimensionError& e) {
        throw DimensionError(ctx + e.what());
    }
}

inline EnsembleMember train_member(const FeatureMatrix& train, const EnsembleConfig& cfg,
                                   const IqrConfig& iqr, const JkGrid& grid,
                                   RandomStream member_stream) {
    FeatureTransform transform;
    switch (cfg.mode) {
        case EnsembleMode::rs50:
            transform = sample_subspace(train.cols(), 0.5, member_stream);
            break;
        case EnsembleMode::rs75:
            transform = sample_subspace(train.cols(), 0.75, member_stream);
            break;
        case EnsembleMode::rp: {
            const std::size_t p = cfg.projected_dims == 0 ? train.cols() : cfg.projected_dims;
            transform = generate_rp_matrix(p, train.cols(), member_stream, cfg.normalize_rp_rows);
            break;
        }
    }

    const FeatureMatrix transformed = apply_transform(transform, train);
    std::optional<NormalizationParams> view_norm;
    const bool view_clamp = cfg.member_scaling == MemberScaling::clamped;
    FeatureMatrix data = transformed;
    if (cfg.member_scaling != MemberScaling::none) {
        view_norm = fit_minmax(transformed);
        // on the training rows themselves the clamp never fires
        data = apply_minmax_unclamped(*view_norm, transformed);
    }
    const NormalizationParams model_norm =
        view_norm ? *view_norm : NormalizationParams{std::vector<double>(data.cols(), 0.0),
                                                     std::vector<double>(data.cols(), 1.0)};

    if (cfg.tuning == TuningMode::none_theta1) {
        return EnsembleMember{std::move(transform),
                              std::move(view_norm),
                              view_clamp,
                              OcnnModel(data, OcnnParams::nn11(), model_norm),
                              std::nullopt,
                              std::numeric_limits<double>::quiet_NaN()};
    }

    IqrConfig effective = iqr;
    effective.min_rejected = std::max<std::size_t>(iqr.min_rejected, cfg.inner_folds);
    const NoiseSplit split = iqr_reject(data, effective);
    const InnerCvPlan plan = make_inner_plan(split, cfg.inner_folds, member_stream.derive(1));

    TunedParams tuned = cfg.tuning == TuningMode::jk_grid
        ? optimise_jk(data, split, plan, grid, cfg.include_noise_in_inner_train)
        : optimise_theta(data, split, plan, cfg.include_noise_in_inner_train);
    const OcnnParams params = tuned.is_jk()
        ? OcnnParams::jknn(tuned.jk().j, tuned.jk().k)
        : OcnnParams::nn11(tuned.theta().theta);

    // deploy on the retained targets only; the rejected rows were removed as
    // noise, not merely held out for validation
    return EnsembleMember{std::move(transform),
                          std::move(view_norm),
                          view_clamp,
                          OcnnModel(data.select_rows(split.retained), params, model_norm),
                          tuned,
                          split.omega_used};
}

} // namespace detail

/// Train L independent members; member i draws everything from the stream
/// derived with child id i, so results do not depend on thread scheduling.
inline EnsembleModel train_ensemble(const FeatureMatrix& train, const EnsembleConfig& cfg,
                                    const IqrConfig& iqr, const JkGrid& grid,
                                    RandomStream stream) {
    if (cfg.members < 1) throw ParameterError("train_ensemble: need at least one member");
    if (train.rows() < 2) throw ParameterError("train_ensemble: need at least two training rows");

    std::vector<std::optional<EnsembleMember>> slots(cfg.members);
    parallel_for(cfg.members, cfg.threads, [&](std::size_t i) {
        slots[i] = detail::with_member_context(
            i, [&] { return detail::train_member(train, cfg, iqr, grid, stream.derive(i)); });
    });

    EnsembleModel model;
    model.mode = cfg.mode;
    model.members.reserve(cfg.members);
    for (auto& s : slots) model.members.push_back(std::move(*s));
    return model;
}

/// Majority vote: accept iff strictly more than half of the members accept;
/// an exact tie rejects.
inline std::vector<Decision> predict_majority(const EnsembleModel& model,
                                              const FeatureMatrix& queries,
                                              std::size_t threads = 1) {
    if (model.members.empty()) throw ParameterError("predict_majority: empty ensemble");
    const std::size_t n = queries.rows();
    std::vector<std::vector<Decision>> votes(model.members.size());
    parallel_for(model.members.size(), threads, [&](std::size_t m) {
        const EnsembleMember& member = model.members[m];
        votes[m] = member.model.classify_batch(member.view(queries));
    });

    std::vector<Decision> out;
    out.reserve(n);
    for (std::size_t q = 0; q < n; ++q) {
        std::size_t accepts = 0;
        for (const auto& v : votes)
            if (v[q] == Decision::accept) ++accepts;
        out.push_back(2 * accepts > model.members.size() ? Decision::accept : Decision::reject);
    }
    return out;
}

} // namespace ocnn
