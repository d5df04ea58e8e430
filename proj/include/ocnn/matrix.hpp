#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ocnn/errors.hpp"

namespace ocnn {

/// Row-major table of real-valued observations; one row = one observation.
/// Every stored value is finite (checked at ingestion), all rows share the
/// same width. Immutable in practice: the library only ever appends while
/// building and never mutates a matrix it has handed out.
class FeatureMatrix {
public:
    FeatureMatrix() = default;

    explicit FeatureMatrix(std::size_t cols) : cols_(cols) {
        if (cols == 0) throw DimensionError("FeatureMatrix: column count must be >= 1");
    }

    FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : cols_(cols), data_(std::move(values)) {
        if (cols == 0) throw DimensionError("FeatureMatrix: column count must be >= 1");
        if (data_.size() != rows * cols)
            throw DimensionError("FeatureMatrix: value count " + std::to_string(data_.size()) +
                                 " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
        for (double v : data_)
            if (!std::isfinite(v)) throw ParameterError("FeatureMatrix: non-finite value");
    }

    static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) throw DimensionError("FeatureMatrix::from_rows: no rows");
        FeatureMatrix m(rows.front().size());
        for (const auto& r : rows) m.append_row(r);
        return m;
    }

    std::size_t rows() const { return cols_ == 0 ? 0 : data_.size() / cols_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void append_row(std::span<const double> values) {
        if (cols_ == 0) cols_ = values.size();
        if (values.size() != cols_)
            throw DimensionError("FeatureMatrix: row width " + std::to_string(values.size()) +
                                 " != " + std::to_string(cols_));
        for (double v : values)
            if (!std::isfinite(v)) throw ParameterError("FeatureMatrix: non-finite value");
        data_.insert(data_.end(), values.begin(), values.end());
    }

    /// New matrix holding the given rows, in the given order.
    FeatureMatrix select_rows(std::span<const std::size_t> indices) const {
        FeatureMatrix out(cols_);
        for (std::size_t i : indices) out.append_row(row(i));
        return out;
    }

    /// New matrix holding the given columns, in the given order.
    FeatureMatrix select_cols(std::span<const std::size_t> columns) const {
        for (std::size_t c : columns)
            if (c >= cols_) throw DimensionError("FeatureMatrix::select_cols: column out of range");
        FeatureMatrix out(columns.size());
        std::vector<double> buf(columns.size());
        for (std::size_t i = 0; i < rows(); ++i) {
            for (std::size_t j = 0; j < columns.size(); ++j) buf[j] = (*this)(i, columns[j]);
            out.append_row(buf);
        }
        return out;
    }

    const std::vector<double>& values() const { return data_; }

private:
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace ocnn
