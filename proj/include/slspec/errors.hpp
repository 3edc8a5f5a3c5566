#pragma once

#include <stdexcept>

namespace slspec {

/// Malformed or out-of-contract input (bad spec, bad config, violated precondition).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-convergence, overflow, or a root search that came up short.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slspec
