#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ocnn/detail/text.hpp"
#include "ocnn/errors.hpp"
#include "ocnn/matrix.hpp"
#include "ocnn/metrics.hpp"
#include "ocnn/random.hpp"

namespace ocnn {

/// A parsed dataset: features plus a binary target/outlier label per row.
/// raw_classes keeps the original class strings for provenance and writing.
struct LabeledDataset {
    FeatureMatrix features;
    std::vector<Label> labels;
    std::vector<std::string> raw_classes;
    std::vector<std::string> attribute_names;
    std::string name;
    std::string source_path;
    std::string format;
    std::string target_class; // which raw class string became `target`

    std::size_t target_count() const {
        return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::target));
    }
    std::size_t outlier_count() const { return labels.size() - target_count(); }

    double imbalance_ratio() const {
        const std::size_t t = target_count();
        const std::size_t o = outlier_count();
        const std::size_t lo = std::min(t, o);
        if (lo == 0) return 0.0;
        return static_cast<double>(std::max(t, o)) / static_cast<double>(lo);
    }
};

namespace detail {

inline double parse_feature(const std::string& field, const std::string& path, std::size_t lineno) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": non-numeric feature value '" +
                         field + "'");
    }
}

/// Majority raw class, ties broken by the lexicographically smaller string.
inline std::string majority_class(const std::vector<std::string>& raw) {
    std::map<std::string, std::size_t> counts;
    for (const auto& c : raw) ++counts[c];
    std::string best;
    std::size_t best_count = 0;
    for (const auto& [cls, count] : counts) {
        if (count > best_count) {
            best = cls;
            best_count = count;
        }
    }
    return best;
}

inline void assign_labels(LabeledDataset& ds, const std::optional<std::string>& target_label) {
    const std::string target = target_label ? *target_label : majority_class(ds.raw_classes);
    bool seen = false;
    ds.labels.clear();
    ds.labels.reserve(ds.raw_classes.size());
    for (const auto& c : ds.raw_classes) {
        ds.labels.push_back(c == target ? Label::target : Label::outlier);
        seen = seen || c == target;
    }
    if (!seen && !ds.raw_classes.empty())
        throw ParseError(ds.source_path + ": target label '" + target + "' matches no row");
    ds.target_class = target;
}

} // namespace detail

/// KEEL `.dat` reader: '@' header lines (@relation, @attribute, @inputs,
/// @output(s)), then comma-separated rows after @data with the output
/// attribute last unless an @output line names it. The target class defaults
/// to the majority class, since imbalanced repositories label the rare
/// minority "positive" while the trained-on target is the abundant class.
inline LabeledDataset parse_keel(const std::string& path,
                                 const std::optional<std::string>& target_label = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path);

    LabeledDataset ds;
    ds.source_path = path;
    ds.format = "keel";

    std::vector<std::string> attributes;
    std::vector<std::string> class_domain;
    std::string output_attribute;
    bool in_data = false;
    std::string line;
    std::size_t lineno = 0;
    std::size_t class_index = 0;

    while (std::getline(in, line)) {
        ++lineno;
        const std::string entry = detail::trim(line);
        if (entry.empty()) continue;

        if (!in_data && entry.front() == '@') {
            std::stringstream ss(entry);
            std::string keyword;
            ss >> keyword;
            const std::string kw = detail::lowercase(keyword);
            if (kw == "@relation") {
                ss >> ds.name;
            } else if (kw == "@attribute") {
                std::string name;
                ss >> name;
                // names may run straight into a domain, e.g. Class{a,b}
                const auto brace = name.find('{');
                std::string rest;
                std::getline(ss, rest);
                if (brace != std::string::npos) {
                    rest = name.substr(brace) + rest;
                    name = name.substr(0, brace);
                }
                if (name.empty())
                    throw ParseError(path + ":" + std::to_string(lineno) + ": unnamed attribute");
                attributes.push_back(name);
                const auto open = rest.find('{');
                const auto close = rest.find('}');
                if (open != std::string::npos && close != std::string::npos && close > open) {
                    class_domain = detail::split_fields(rest.substr(open + 1, close - open - 1));
                    class_index = attributes.size() - 1; // domain-valued attribute = the class
                }
            } else if (kw == "@output" || kw == "@outputs") {
                ss >> output_attribute;
            } else if (kw == "@inputs" || kw == "@input") {
                // recorded implicitly: everything that is not the output
            } else if (kw == "@data") {
                if (attributes.size() < 2)
                    throw ParseError(path + ":" + std::to_string(lineno) +
                                     ": need at least one feature attribute and a class attribute");
                if (!output_attribute.empty()) {
                    const auto it = std::find(attributes.begin(), attributes.end(), output_attribute);
                    if (it == attributes.end())
                        throw ParseError(path + ": @output names unknown attribute '" +
                                         output_attribute + "'");
                    class_index = static_cast<std::size_t>(it - attributes.begin());
                } else if (class_domain.empty()) {
                    class_index = attributes.size() - 1;
                }
                for (std::size_t i = 0; i < attributes.size(); ++i)
                    if (i != class_index) ds.attribute_names.push_back(attributes[i]);
                ds.features = FeatureMatrix(attributes.size() - 1);
                in_data = true;
            } else {
                throw ParseError(path + ":" + std::to_string(lineno) + ": unknown header '" +
                                 keyword + "'");
            }
            continue;
        }

        if (!in_data)
            throw ParseError(path + ":" + std::to_string(lineno) + ": data before @data header");

        const std::vector<std::string> fields = detail::split_fields(entry);
        if (fields.size() != attributes.size())
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(attributes.size()) + " fields, got " +
                             std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size() - 1);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == class_index) continue;
            row.push_back(detail::parse_feature(fields[i], path, lineno));
        }
        const std::string& cls = fields[class_index];
        if (!class_domain.empty() &&
            std::find(class_domain.begin(), class_domain.end(), cls) == class_domain.end())
            throw ParseError(path + ":" + std::to_string(lineno) + ": class '" + cls +
                             "' not in the declared domain");
        ds.features.append_row(row);
        ds.raw_classes.push_back(cls);
    }

    if (!in_data) throw ParseError(path + ": no @data section");
    if (ds.raw_classes.empty()) throw ParseError(path + ": no data rows");
    if (ds.name.empty()) ds.name = path;
    detail::assign_labels(ds, target_label);
    return ds;
}

/// Headered CSV reader: the named label column carries the class string,
/// every other column must be numeric.
inline LabeledDataset parse_csv(const std::string& path, const std::string& label_column,
                                const std::string& target_label) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path);

    LabeledDataset ds;
    ds.source_path = path;
    ds.format = "csv";
    ds.name = path;

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    const std::vector<std::string> header = detail::split_fields(line);
    const auto it = std::find(header.begin(), header.end(), label_column);
    if (it == header.end())
        throw ParseError(path + ": label column '" + label_column + "' not found");
    const std::size_t label_index = static_cast<std::size_t>(it - header.begin());
    for (std::size_t i = 0; i < header.size(); ++i)
        if (i != label_index) ds.attribute_names.push_back(header[i]);
    if (header.size() < 2) throw ParseError(path + ": no feature columns");
    ds.features = FeatureMatrix(header.size() - 1);

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const std::vector<std::string> fields = detail::split_fields(line);
        if (fields.size() != header.size())
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size() - 1);
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (i != label_index) row.push_back(detail::parse_feature(fields[i], path, lineno));
        ds.features.append_row(row);
        ds.raw_classes.push_back(fields[label_index]);
    }
    if (ds.raw_classes.empty()) throw ParseError(path + ": no data rows");
    detail::assign_labels(ds, std::optional<std::string>(target_label));
    return ds;
}

/// Description of a synthetic fixture: a Gaussian target cluster plus
/// outliers placed uniformly on a sphere of the given radius.
struct SyntheticSpec {
    std::size_t dims = 2;
    std::size_t targets = 100;
    double target_sigma = 0.1;
    std::vector<double> center; // empty = origin
    std::size_t outliers = 10;
    double outlier_radius = 10.0;
};

inline LabeledDataset generate_synthetic(const SyntheticSpec& spec, RandomStream stream) {
    if (spec.dims < 1) throw ParameterError("generate_synthetic: dims must be >= 1");
    if (spec.targets < 1) throw ParameterError("generate_synthetic: need at least one target");
    if (!(spec.target_sigma >= 0)) throw ParameterError("generate_synthetic: sigma must be >= 0");
    if (spec.outliers > 0 && !(spec.outlier_radius > 0))
        throw ParameterError("generate_synthetic: outlier radius must be positive");
    if (!spec.center.empty() && spec.center.size() != spec.dims)
        throw ParameterError("generate_synthetic: center width does not match dims");

    LabeledDataset ds;
    ds.name = "synthetic";
    ds.format = "synthetic";
    ds.target_class = "target";
    ds.features = FeatureMatrix(spec.dims);
    for (std::size_t i = 0; i < spec.dims; ++i) ds.attribute_names.push_back("x" + std::to_string(i));

    std::vector<double> row(spec.dims);
    for (std::size_t i = 0; i < spec.targets; ++i) {
        for (std::size_t j = 0; j < spec.dims; ++j) {
            const double c = spec.center.empty() ? 0.0 : spec.center[j];
            row[j] = c + spec.target_sigma * stream.normal();
        }
        ds.features.append_row(row);
        ds.labels.push_back(Label::target);
        ds.raw_classes.push_back("target");
    }
    for (std::size_t i = 0; i < spec.outliers; ++i) {
        double norm = 0.0;
        for (std::size_t j = 0; j < spec.dims; ++j) {
            row[j] = stream.normal();
            norm += row[j] * row[j];
        }
        norm = std::sqrt(norm);
        for (std::size_t j = 0; j < spec.dims; ++j) {
            const double c = spec.center.empty() ? 0.0 : spec.center[j];
            const double dir = norm > 0 ? row[j] / norm : (j == 0 ? 1.0 : 0.0);
            row[j] = c + spec.outlier_radius * dir;
        }
        ds.features.append_row(row);
        ds.labels.push_back(Label::outlier);
        ds.raw_classes.push_back("outlier");
    }
    return ds;
}

inline void write_dataset_csv(const LabeledDataset& ds, const std::string& path,
                              const std::string& label_column = "class") {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write: " + path);
    for (const auto& a : ds.attribute_names) out << a << ",";
    out << label_column << "\n";
    for (std::size_t i = 0; i < ds.features.rows(); ++i) {
        for (double v : ds.features.row(i)) out << detail::format_double(v) << ",";
        out << ds.raw_classes[i] << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

inline void write_dataset_keel(const LabeledDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write: " + path);
    out << "@relation " << (ds.name.empty() ? "dataset" : ds.name) << "\n";
    for (const auto& a : ds.attribute_names) out << "@attribute " << a << " real\n";
    std::set<std::string> classes(ds.raw_classes.begin(), ds.raw_classes.end());
    out << "@attribute Class {";
    for (auto it = classes.begin(); it != classes.end(); ++it)
        out << (it == classes.begin() ? "" : ", ") << *it;
    out << "}\n@data\n";
    for (std::size_t i = 0; i < ds.features.rows(); ++i) {
        for (double v : ds.features.row(i)) out << detail::format_double(v) << ", ";
        out << ds.raw_classes[i] << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

} // namespace ocnn
