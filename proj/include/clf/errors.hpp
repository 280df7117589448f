#pragma once

#include <stdexcept>
#include <string>

namespace clf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a type invariant or an operation precondition.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The kernel denominator came within the guard threshold of zero.
class NearSingularError : public Error {
public:
    using Error::Error;
};

/// An integrand produced NaN or infinity at a quadrature node.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// Root bracketing failed (e.g. non-finite modular at a bracket end).
class BracketError : public Error {
public:
    using Error::Error;
};

/// Malformed run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace clf
