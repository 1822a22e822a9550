#pragma once

#include <stdexcept>
#include <string>

namespace harmonia {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An invalid tuning or model parameter (e.g. a non-positive scale factor).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A hypothesis the caller must certify does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Numerical accuracy could not be reached, or two independent routes disagree.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double primary, double secondary)
        : Error(what), primary_(primary), secondary_(secondary) {}

    double primary() const noexcept { return primary_; }
    double secondary() const noexcept { return secondary_; }

private:
    double primary_;
    double secondary_;
};

/// An integrand returned a non-finite value at an interior abscissa.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, double abscissa)
        : Error(what), abscissa_(abscissa) {}

    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& what, std::string path)
        : Error(what + ": " + path), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace harmonia
