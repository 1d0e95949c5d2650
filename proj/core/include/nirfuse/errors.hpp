#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nirfuse {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable or unwritable file.
class IoError : public Error {
public:
    using Error::Error;
};

/// File decodes but is not a supported raster format / layout.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Dimension mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Input too small for the requested operation.
class SizeError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DatasetError : public Error {
public:
    using Error::Error;
};

/// Iterative solver failed to reach the requested tolerance; carries the
/// achieved relative residual and the per-iteration residual history.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved, std::vector<double> history)
        : Error(what), achieved_residual(achieved), residual_history(std::move(history)) {}

    double achieved_residual;
    std::vector<double> residual_history;
};

} // namespace nirfuse
