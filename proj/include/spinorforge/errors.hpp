#pragma once
#include <stdexcept>
#include <string>

namespace spinorforge {

// Bad arguments, malformed input files, violated preconditions.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-finite values, singular potentials, failed orthogonality after a solve.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace spinorforge
