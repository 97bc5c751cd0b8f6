#pragma once

#include <stdexcept>
#include <string>

namespace wvt {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a Cholesky-defined operation meets a matrix that is not
// positive definite. `pivot` is the 0-based index of the first failing pivot.
struct NotPositiveDefinite : std::domain_error {
  int pivot;
  NotPositiveDefinite(const std::string& what, int pivot_index)
      : std::domain_error(what), pivot(pivot_index) {}
};

struct SingularOperator : std::domain_error {
  using std::domain_error::domain_error;
};

// Shape-parameter threshold violations; the message names the binding bound.
struct ShapeThreshold : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace wvt
