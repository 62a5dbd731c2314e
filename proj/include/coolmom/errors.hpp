#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coolmom {

/// Thrown when an argument violates a documented precondition
/// (shape mismatch, out-of-range hyperparameter, empty window, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A force, parameter or activation became NaN/Inf. Carries the iteration
/// index at which it was detected so diverging runs can be diagnosed.
class NonFiniteError : public std::runtime_error {
public:
    NonFiniteError(std::uint64_t step, const std::string& what)
        : std::runtime_error("non-finite " + what + " at step " + std::to_string(step)),
          step_(step) {}

    std::uint64_t step() const noexcept { return step_; }

private:
    std::uint64_t step_;
};

void require(bool condition, const std::string& message);

void require_same_shape(std::size_t expected, std::size_t actual, const char* what);

}  // namespace coolmom
