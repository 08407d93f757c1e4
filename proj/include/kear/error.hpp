#pragma once

#include <stdexcept>
#include <string>

namespace kear {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument violates a documented precondition (empty input, wrong length, non-finite value).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Median-scaled bandwidth came out zero or non-finite.
class DegenerateBandwidth : public Error {
public:
    using Error::Error;
};

/// Normal-equation system carries no information (zero matrix).
class NearSingularSystem : public Error {
public:
    using Error::Error;
};

/// Fixed-point denominator fell below the configured floor.
class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

/// ODE integration produced a non-finite state.
class IntegrationBlowup : public Error {
public:
    using Error::Error;
};

/// CSV loading failures. Each cause has its own type so callers can tell them apart.
class LoadError : public Error {
public:
    using Error::Error;
};
class FileNotFound : public LoadError {
public:
    using LoadError::LoadError;
};
class NonNumericRow : public LoadError {
public:
    using LoadError::LoadError;
};
class EmptySeries : public LoadError {
public:
    using LoadError::LoadError;
};

/// Evaluation configuration does not fit the data.
class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// No grid point survived hyperparameter selection.
class SelectionError : public Error {
public:
    using Error::Error;
};

}  // namespace kear
