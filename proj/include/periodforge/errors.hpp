#pragma once

#include <stdexcept>
#include <string>

namespace periodforge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Evaluation hit a pole. `factor` names the vanishing denominator factor.
class PoleError : public DomainError {
public:
    PoleError(const std::string& what, std::string factor)
        : DomainError(what + " (factor " + factor + ")"), factor_(std::move(factor)) {}
    const std::string& factor() const { return factor_; }

private:
    std::string factor_;
};

class ContinuationError : public Error {
public:
    using Error::Error;
};

class StepSizeError : public ContinuationError {
public:
    using ContinuationError::ContinuationError;
};

class DegeneracyError : public Error {
public:
    using Error::Error;
};

class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved = 0.0)
        : Error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

class BracketError : public Error {
public:
    using Error::Error;
};

class NoSolutionError : public Error {
public:
    using Error::Error;
};

class InvalidSolutionError : public Error {
public:
    using Error::Error;
};

class IndeterminateError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class SymmetryError : public Error {
public:
    SymmetryError(const std::string& what, double mismatch = 0.0)
        : Error(what), mismatch_(mismatch) {}
    double mismatch() const { return mismatch_; }

private:
    double mismatch_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace periodforge
