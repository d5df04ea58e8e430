#pragma once

#include <stdexcept>
#include <string>

namespace ocnn {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched vector/matrix dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid parameter value (k out of range, bad grid bounds, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed dataset or config file; carries file/line context in the message.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A cross-validation plan cannot be built (too few rows in a class).
class PlanError : public Error {
public:
    using Error::Error;
};

/// The IQR filter cannot reject the required number of rows.
class NoiseBudgetError : public Error {
public:
    using Error::Error;
};

/// A metric is undefined for the given counts (a class absent from the fold).
class MetricError : public Error {
public:
    using Error::Error;
};

/// File system failure; carries the path in the message.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ocnn
