#ifndef DSPROJ_ERRORS_HPP_
#define DSPROJ_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dsproj {

/// Malformed input text (Matrix Market, target vector files, ...).
class ParseError : public std::runtime_error {
public:
  ParseError(std::string message, long line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

/// Input violates a domain requirement (asymmetry, negative entries,
/// duplicate entries under the reject policy, index out of range).
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Problem data is inconsistent (weight/pattern mismatch, bad target vector,
/// backend not applicable).
class SpecificationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown in a direct factorization (non-positive pivot).
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative linear solver failed to reach its tolerance.
class IterativeSolverError : public std::runtime_error {
public:
  IterativeSolverError(std::string message, double residual, int iterations)
      : std::runtime_error(std::move(message)), residual_(residual),
        iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

private:
  double residual_;
  int iterations_;
};

/// Matrix balancing is undefined (zero row or column).
class BalancingError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dsproj

#endif  // DSPROJ_ERRORS_HPP_
