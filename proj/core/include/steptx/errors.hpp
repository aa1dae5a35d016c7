#pragma once

#include <stdexcept>

namespace steptx {

// Vector lengths incompatible with the requested operation.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid parameter value (non-finite input, empty list, bad range, ...).
struct argument_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A method's applicability condition fails for otherwise well-formed data.
// The message names the applicable alternative where one exists.
struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace steptx
