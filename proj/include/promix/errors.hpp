#pragma once

#include <stdexcept>

namespace promix {

// Vector/matrix sizes disagree with each other or with a spec.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A spec parameter lies outside its admissible range.
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The operation cannot honor the requested argument for this variant
// (e.g. a residual-form resolvent away from gamma = 1).
struct UnsupportedParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A family or problem failed validation.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace promix
