#pragma once

#include <stdexcept>
#include <string>

namespace midy {

// Error hierarchy. The CLI maps these to exit codes: domain errors -> 2,
// budget/bound errors -> 3, I/O -> 5; anything else is a hard failure.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

/// gcd(b, N) != 1 where a unit is required.
struct NotCoprime : DomainError {
    using DomainError::DomainError;
};

/// d does not divide the multiplicative order it is supposed to split.
struct NotADivisor : DomainError {
    using DomainError::DomainError;
};

struct ModuliNotCoprime : DomainError {
    using DomainError::DomainError;
};

/// A stated theorem hypothesis does not hold for the given inputs.
struct HypothesisViolated : DomainError {
    using DomainError::DomainError;
};

struct BudgetError : Error {
    using Error::Error;
};

struct FactorizationBudgetExceeded : BudgetError {
    using BudgetError::BudgetError;
};

struct OracleBoundExceeded : BudgetError {
    using BudgetError::BudgetError;
};

// A checked theorem consequence failed. This means either an implementation
// bug or a genuine counterexample; callers must not swallow it.
struct PostconditionViolated : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace midy
