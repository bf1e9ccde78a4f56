#pragma once

#include <stdexcept>
#include <string>

namespace semiq {

// Bad inputs: broken invariants, malformed specs, incompatible dimensions.
// The CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation produced a result that cannot be trusted (e.g. a trace with a
// large imaginary part). The CLI maps these to exit code 1.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver hit its iteration cap before certifying the requested
// tolerance. Carries the best bounds reached so the caller can still inspect
// how close the run got.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double lower, double upper)
      : NumericError(what), lower_bound(lower), upper_bound(upper) {}

  double lower_bound;
  double upper_bound;
};

}  // namespace semiq
