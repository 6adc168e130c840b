#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gaugeforge {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position of the failure.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, std::size_t offset)
        : Error(message + " (offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Identifier outside {t,x,v,a,sin,cos,exp,pi} and the declared constants.
class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(const std::string& name, std::size_t offset)
        : Error("unknown identifier '" + name + "' (offset " + std::to_string(offset) + ")"),
          name_(name),
          offset_(offset) {}
    const std::string& name() const noexcept { return name_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::string name_;
    std::size_t offset_;
};

/// Evaluation hit a free symbol with no value in the bindings.
class UnboundSymbol : public Error {
public:
    explicit UnboundSymbol(const std::string& name)
        : Error("unbound symbol '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Division by zero or 0 raised to a negative power during evaluation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A Lagrangian-position argument depends on the acceleration variable.
class InvalidLagrangian : public Error {
public:
    using Error::Error;
};

/// A gauge function depends on something other than t.
class InvalidGauge : public Error {
public:
    using Error::Error;
};

/// ODE residual has no acceleration dependence, or a nonlinear one.
class NotSecondOrder : public Error {
public:
    using Error::Error;
};

/// Fewer than three samples; differencing is impossible.
class TrajectoryTooShort : public Error {
public:
    using Error::Error;
};

/// Driving force expression references x, v or a.
class ForceContainsState : public Error {
public:
    using Error::Error;
};

/// Integration produced a non-finite state. `step` is the failing step index.
class NonFiniteState : public Error {
public:
    NonFiniteState(const std::string& message, std::size_t step)
        : Error(message + " (step " + std::to_string(step) + ")"), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// More than one oscillator parameterization supplied.
class ConflictingParameters : public Error {
public:
    using Error::Error;
};

/// Parameter outside its valid range (k, m, g, pendulum length <= 0, dt <= 0, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A Lagrangian built as a total time derivative failed null certification.
/// Indicates a bug in the expression core, never a user error.
class InternalNullViolation : public Error {
public:
    using Error::Error;
};

/// Config file could not be parsed or failed validation.
class ConfigError : public Error {
public:
    ConfigError(const std::string& message, const std::string& key)
        : Error(key.empty() ? message : message + " (key '" + key + "')"), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace gaugeforge
