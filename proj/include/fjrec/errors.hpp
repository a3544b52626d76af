#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fjrec {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside its mathematical domain (u not in [0,1], negative rho, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Content older than the eligibility window was passed to a cost evaluation.
class OutOfWindowError : public DomainError {
public:
    using DomainError::DomainError;
};

// Singular system, failed eigen/power iteration, degenerate steady state.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Iterative solver hit its cap before the KKT residual dropped below tolerance.
class NonConvergedError : public NumericalError {
public:
    NonConvergedError(const std::string& what, double residual, int iterations)
        : NumericalError(what), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

// Malformed input file. `row` is 1-based and counts the header as row 1.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::optional<std::size_t> row = std::nullopt)
        : Error(row ? "row " + std::to_string(*row) + ": " + what : what), row_(row) {}

    std::optional<std::size_t> row() const noexcept { return row_; }

private:
    std::optional<std::size_t> row_;
};

// Input parsed but violates a data invariant (e.g. stored score disagrees with its dims).
class ValidationError : public ParseError {
public:
    using ParseError::ParseError;
};

class NoContentError : public Error {
public:
    using Error::Error;
};

// A metric that has no defined value for the given run (e.g. no recommendation events).
class MetricError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Wraps any failure inside the closed loop with the time step it occurred at.
class RunError : public Error {
public:
    RunError(int step, const std::string& what)
        : Error("t=" + std::to_string(step) + ": " + what), step_(step) {}

    int step() const noexcept { return step_; }

private:
    int step_;
};

}  // namespace fjrec
