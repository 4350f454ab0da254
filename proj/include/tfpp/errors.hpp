#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfpp {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter outside the supported envelope (rho, beta, mu, T, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Array length does not match the grid it is supposed to live on.
class ShapeError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a function (e.g. kernel at t <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// An iteration hit its cap. Carries the residual history for diagnosis.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history)) {}
    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

/// The inverse problem data violate a solvability condition.
class AdmissibilityError : public Error {
public:
    AdmissibilityError(const std::string& condition, const std::string& what)
        : Error(what), condition_(condition) {}
    const std::string& condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

/// Linear system without the structure the solver relies on.
class IllPosedSystemError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Expression syntax error. position is 1-based (byte offset + 1); the
/// expected set lists what the parser could have accepted there.
class ParseError : public ConfigError {
public:
    ParseError(const std::string& what, std::size_t position, std::vector<std::string> expected)
        : ConfigError(what), position_(position), expected_(std::move(expected)) {}
    std::size_t position() const noexcept { return position_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::vector<std::string> expected_;
};

/// Expression evaluation failure (division by zero, sqrt of a negative, ...).
class EvalError : public DomainError {
public:
    EvalError(const std::string& what, std::size_t position) : DomainError(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace tfpp
