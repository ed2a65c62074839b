#pragma once

#include <stdexcept>
#include <string>

namespace edgealloc {

/// Base of every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A formula received an argument outside its mathematical domain.
struct DomainError : Error {
    using Error::Error;
};

/// A scenario, configuration or experiment violates a declared invariant.
struct ValidationError : Error {
    using Error::Error;
};

/// Storage constraint C5 cannot be met by the scenario.
struct InfeasibleScenario : ValidationError {
    using ValidationError::ValidationError;
};

/// An allocation lies outside the box or the resource budgets.
struct InfeasibleAllocation : Error {
    using Error::Error;
};

/// A solver or inner minimization failed.
struct SolverError : Error {
    using Error::Error;
};

struct NonFiniteObjective : SolverError {
    using SolverError::SolverError;
};

/// Malformed scenario file. Carries the offending line (0 if not line-bound) and field.
struct ParseError : ValidationError {
    ParseError(const std::string& file, int line, const std::string& field, const std::string& what)
        : ValidationError(file + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                          (field.empty() ? std::string() : "field '" + field + "': ") + what),
          line(line),
          field(field) {}
    int line;
    std::string field;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace edgealloc
