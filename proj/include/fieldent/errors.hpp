#pragma once

#include <stdexcept>
#include <string>

namespace fieldent {

// Base for every failure raised by a numerical routine. The module and
// operation names are carried so the CLI can report where a run died.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string module, std::string operation, const std::string& what)
        : std::runtime_error(module + "::" + operation + ": " + what),
          module_(std::move(module)), operation_(std::move(operation)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& operation() const noexcept { return operation_; }

private:
    std::string module_;
    std::string operation_;
};

class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegeneracyError : public NumericalError {
public:
    DegeneracyError(std::string module, std::string operation, const std::string& what, int step)
        : NumericalError(std::move(module), std::move(operation), what), step_(step) {}
    int step() const noexcept { return step_; }

private:
    int step_;
};

// Raised when two regions are not spacelike separated although the
// computation requires commuting observables.
class CausalityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// The two symplectic-spectrum algorithms disagree beyond tolerance.
class PrecisionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Precondition violations on user-facing parameters.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace fieldent
