#pragma once

#include <stdexcept>
#include <string>

namespace fractalcalc {

// Input errors (bad arguments, malformed specs or files). The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateOrderError : public InputError {
 public:
  using InputError::InputError;
};

class UnsupportedForcingError : public InputError {
 public:
  using InputError::InputError;
};

// Numeric errors (singular systems, non-convergence). The CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResolutionError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DependentBasisError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IntegrandError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Raised when the mass trend cannot be classified; carries the last bracket on alpha.
class EstimationError : public NumericError {
 public:
  EstimationError(const std::string& what, double lo, double hi)
      : NumericError(what), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Raised when the difference-quotient sequence does not settle; carries the last two iterates
/// (for two-sided evaluation these are the left and right limits).
class NonDifferentiableError : public NumericError {
 public:
  NonDifferentiableError(const std::string& what, double first, double second)
      : NumericError(what), first_(first), second_(second) {}
  double first() const { return first_; }
  double second() const { return second_; }

 private:
  double first_;
  double second_;
};

}  // namespace fractalcalc
