#pragma once

#include <stdexcept>
#include <string>

namespace kgflow {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or grid (usage/input problem).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Momentum grid too narrow for the requested packet.
class TruncationError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Superposition produced a vanishing state.
class DegenerateStateError : public Error {
public:
    using Error::Error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Conditioning on an outcome with (numerically) zero probability.
class ZeroProbabilityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Event lies after the final measurement time.
class CausalOrderError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Outcome ensemble misses too much of the total probability.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// Trajectory seeded on a zero of the current.
class NodeError : public DomainError {
public:
    using DomainError::DomainError;
};

} // namespace kgflow
