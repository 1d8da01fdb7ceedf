#pragma once

#include <stdexcept>
#include <string>

namespace nash {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed user input: parse failures, inconsistent problem files,
/// violated value invariants on data crossing the API boundary.
struct InputError : Error {
    using Error::Error;
};

/// An operation was called outside its documented contract.
struct PreconditionError : Error {
    using Error::Error;
};

/// A pipeline stage could not complete: search budgets exhausted,
/// truncation order too small, iteration diverged.
struct PipelineError : Error {
    using Error::Error;
};

/// Candidate search ran out of attempts (coordinate changes, linear forms).
struct ExhaustionError : PipelineError {
    using PipelineError::PipelineError;
};

/// Truncation order or depth budget is too small for the requested run.
struct BudgetError : PipelineError {
    using PipelineError::PipelineError;
};

/// A fixed-point or Newton iteration failed to contract.
struct ContractionError : PipelineError {
    using PipelineError::PipelineError;
};

/// An internal invariant broke; always a bug, never a user error.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace nash
