#pragma once

#include <stdexcept>
#include <string>

namespace graphweave {

/// Malformed input data (edge lists, checkpoints, config files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-side contract was violated (bad parameter, zero-degree node, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values, eigensolver failure, diverging optimisation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Random generation could not satisfy its postcondition.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The exact solver was asked to handle an instance it is not built for.
class ScopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No feasible assignment exists (e.g. non-graphical degree sequence).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace graphweave
