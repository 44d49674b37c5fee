#pragma once

#include <stdexcept>
#include <string>

namespace dsir {

/// Argument outside the domain of a function family or formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A scenario or function spec violates one of its invariants.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed scenario document. `location` is "line N, column M" or a key path.
class ConfigParseError : public std::runtime_error {
public:
    ConfigParseError(std::string location, const std::string& what)
        : std::runtime_error(location + ": " + what), location_(std::move(location)) {}

    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

/// Integrator produced a non-finite state.
class NumericalBlowup : public std::runtime_error {
public:
    NumericalBlowup(double time, const std::string& what)
        : std::runtime_error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Integrator settings that cannot produce a valid mesh.
class IntegratorConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense output requested outside the computed span.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Equilibrium iteration exhausted its budget.
class AnalysisNonConvergence : public std::runtime_error {
public:
    AnalysisNonConvergence(double last_residual, const std::string& what)
        : std::runtime_error(what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

} // namespace dsir
