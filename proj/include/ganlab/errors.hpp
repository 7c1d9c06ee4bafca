#pragma once

#include <stdexcept>
#include <string>

namespace ganlab {

// Shape or rank disagreement between operands.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Argument outside the mathematical domain of an operation (log of a
// non-positive value, negative epsilon, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// A NaN or infinity appeared. Non-finite values are never propagated;
// training loops catch this and record the run as failed.
class NonFiniteError : public std::runtime_error {
public:
    explicit NonFiniteError(const std::string& msg) : std::runtime_error(msg) {}
};

// Misuse of the tape (non-scalar backward root, node from another tape, ...).
class TapeError : public std::logic_error {
public:
    explicit TapeError(const std::string& msg) : std::logic_error(msg) {}
};

// Invalid experiment or training configuration.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace ganlab
