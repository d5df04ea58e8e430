#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "ocnn/detail/text.hpp"
#include "ocnn/errors.hpp"

namespace ocnn {

enum class ClassifierMode { nn11, nn11_theta, jknn };
enum class EnsembleChoice { single, rs50, rs75, rp };
enum class DatasetFormat { keel, csv };

inline std::string to_string(ClassifierMode m) {
    switch (m) {
        case ClassifierMode::nn11: return "11nn";
        case ClassifierMode::nn11_theta: return "11nn-theta";
        case ClassifierMode::jknn: return "jknn";
    }
    return "?";
}

inline std::string to_string(EnsembleChoice e) {
    switch (e) {
        case EnsembleChoice::single: return "single";
        case EnsembleChoice::rs50: return "rs50";
        case EnsembleChoice::rs75: return "rs75";
        case EnsembleChoice::rp: return "rp";
    }
    return "?";
}

inline ClassifierMode classifier_from_string(const std::string& s) {
    if (s == "11nn") return ClassifierMode::nn11;
    if (s == "11nn-theta") return ClassifierMode::nn11_theta;
    if (s == "jknn") return ClassifierMode::jknn;
    throw ParseError("unknown classifier '" + s + "' (expected 11nn, 11nn-theta or jknn)");
}

inline EnsembleChoice ensemble_from_string(const std::string& s) {
    if (s == "single") return EnsembleChoice::single;
    if (s == "rs50") return EnsembleChoice::rs50;
    if (s == "rs75") return EnsembleChoice::rs75;
    if (s == "rp") return EnsembleChoice::rp;
    throw ParseError("unknown ensemble mode '" + s + "' (expected single, rs50, rs75 or rp)");
}

/// Full experiment description. Defaults follow the evaluation protocol:
/// F=5 outer folds, G=2 inner folds, L=25 members, J/K grids up to 10,
/// omega 1.5 with at least 5 rejected rows, min-max normalization.
struct ExperimentConfig {
    std::string dataset_path;
    DatasetFormat format = DatasetFormat::keel;
    std::string label_column;               // csv only
    std::optional<std::string> target_label; // default: majority class

    ClassifierMode classifier = ClassifierMode::nn11;
    EnsembleChoice ensemble = EnsembleChoice::single;

    std::size_t folds = 5;
    std::size_t inner_folds = 2;
    std::size_t members = 25;
    std::size_t j_max = 10;
    std::size_t k_max = 10;
    double omega = 1.5;
    std::size_t min_rejected = 5;
    double omega_decay = 0.9;
    double omega_floor = 0.05;
    bool lower_fence = true;

    std::size_t projected_dims = 0; // 0 keeps the original dimensionality
    std::string member_scaling = "linear"; // none | linear | clamped
    bool normalize_rp_rows = false;
    bool include_noise_in_inner_train = false;

    std::optional<std::uint64_t> seed; // mandatory for runs
    std::size_t threads = 1;
};

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParseError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

template <typename T>
T parse_number(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        if constexpr (std::is_floating_point_v<T>) {
            const double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return static_cast<T>(d);
        } else {
            // stoull would silently wrap negatives
            if (v.find('-') != std::string::npos) throw std::invalid_argument(v);
            const unsigned long long u = std::stoull(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return static_cast<T>(u);
        }
    } catch (const std::exception&) {
        throw ParseError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

} // namespace detail

/// Apply one key/value pair using the CLI flag names as keys.
inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
    using detail::parse_bool;
    using detail::parse_number;
    if (key == "dataset") cfg.dataset_path = value;
    else if (key == "format") {
        if (value == "keel") cfg.format = DatasetFormat::keel;
        else if (value == "csv") cfg.format = DatasetFormat::csv;
        else throw ParseError("config key 'format': expected keel or csv, got '" + value + "'");
    }
    else if (key == "label-column") cfg.label_column = value;
    else if (key == "target-label") cfg.target_label = value;
    else if (key == "classifier") cfg.classifier = classifier_from_string(value);
    else if (key == "ensemble") cfg.ensemble = ensemble_from_string(value);
    else if (key == "folds") cfg.folds = parse_number<std::size_t>(value, key);
    else if (key == "inner-folds") cfg.inner_folds = parse_number<std::size_t>(value, key);
    else if (key == "members") cfg.members = parse_number<std::size_t>(value, key);
    else if (key == "j-max") cfg.j_max = parse_number<std::size_t>(value, key);
    else if (key == "k-max") cfg.k_max = parse_number<std::size_t>(value, key);
    else if (key == "omega") cfg.omega = parse_number<double>(value, key);
    else if (key == "min-rejected") cfg.min_rejected = parse_number<std::size_t>(value, key);
    else if (key == "omega-decay") cfg.omega_decay = parse_number<double>(value, key);
    else if (key == "omega-floor") cfg.omega_floor = parse_number<double>(value, key);
    else if (key == "lower-fence") cfg.lower_fence = parse_bool(value, key);
    else if (key == "projected-dims") cfg.projected_dims = parse_number<std::size_t>(value, key);
    else if (key == "member-scaling") {
        if (value != "none" && value != "linear" && value != "clamped")
            throw ParseError("config key 'member-scaling': expected none, linear or clamped");
        cfg.member_scaling = value;
    }
    else if (key == "normalize-rp-rows") cfg.normalize_rp_rows = parse_bool(value, key);
    else if (key == "include-noise-in-inner-train")
        cfg.include_noise_in_inner_train = parse_bool(value, key);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(value, key);
    else if (key == "threads") cfg.threads = parse_number<std::size_t>(value, key);
    else throw ParseError("unknown config key '" + key + "'");
}

/// Flat key-value config file: one `key = value` per line, '#' comments.
inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string entry = detail::trim(line);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        try {
            apply_config_entry(cfg, detail::trim(entry.substr(0, eq)),
                               detail::trim(entry.substr(eq + 1)));
        } catch (const ParseError& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

} // namespace ocnn
