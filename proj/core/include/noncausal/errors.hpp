#pragma once

#include <stdexcept>
#include <string>

namespace noncausal {

// Error categories double as process exit codes in the command line driver.
enum class ErrorCategory {
    input = 2,        // malformed or inconsistent inputs, unsupported requests
    convergence = 3,  // an optimizer failed to reach a usable optimum
    degeneracy = 4,   // importance sampling collapsed
    evaluation = 5,   // a result is undefined for the given data
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorCategory::input, what) {}
};

// Text that violates a file contract; keeps the 1-based row so messages can
// point at the offending line.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, long row)
        : InputError(what + " (row " + std::to_string(row) + ")"), row_(row) {}

    long row() const noexcept { return row_; }

private:
    long row_;
};

class InsufficientDataError : public InputError {
public:
    using InputError::InputError;
};

class AlignmentError : public InputError {
public:
    using InputError::InputError;
};

class UnsupportedOrderError : public InputError {
public:
    using InputError::InputError;
};

class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what)
        : Error(ErrorCategory::convergence, what) {}
};

class DegeneracyError : public Error {
public:
    explicit DegeneracyError(const std::string& what)
        : Error(ErrorCategory::degeneracy, what), ess_(-1.0) {}

    DegeneracyError(const std::string& what, double effective_sample_size)
        : Error(ErrorCategory::degeneracy, what), ess_(effective_sample_size) {}

    double effective_sample_size() const noexcept { return ess_; }

private:
    double ess_;
};

class EvaluationError : public Error {
public:
    explicit EvaluationError(const std::string& what)
        : Error(ErrorCategory::evaluation, what) {}
};

}  // namespace noncausal
