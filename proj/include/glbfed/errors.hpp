#pragma once

#include <stdexcept>
#include <string>

namespace glbfed {

// Base for everything the CLI maps to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NonpositiveRateError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnstableLoadError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegenerateRenewablesError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegenerateWeatherError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DomainViolationError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class StepTooLargeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Too few events to form an estimate; CLI exit code 3.
class HorizonTooShortError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact solver guard; CLI exit code 4.
class StateSpaceTooLargeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Direct solve failed; cannot happen for an irreducible generator.
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace glbfed
