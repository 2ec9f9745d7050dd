#ifndef QHPM_ERROR_HPP_
#define QHPM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace qhpm {

enum class ErrorKind {
  singular_matrix,
  non_finite,
  infeasible_rescale,
  overflow,
  divergent_series,
  dimension_overflow,
  missing_column,
  unknown_term,
  non_convergence,
  domain,
  hypothesis_violated,
  zero_vector,
  precondition_violated,
  invalid_argument,
  parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::singular_matrix: return "singular matrix";
    case ErrorKind::non_finite: return "non-finite entry";
    case ErrorKind::infeasible_rescale: return "infeasible rescale";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::divergent_series: return "divergent series";
    case ErrorKind::dimension_overflow: return "dimension overflow";
    case ErrorKind::missing_column: return "missing column";
    case ErrorKind::unknown_term: return "unknown term";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::hypothesis_violated: return "hypothesis violated";
    case ErrorKind::zero_vector: return "zero vector";
    case ErrorKind::precondition_violated: return "precondition violated";
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::parse: return "parse error";
  }
  return "unknown error";
}

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Iterative procedure hit its cap; carries the best residual reached.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_residual)
      : Error(ErrorKind::non_convergence, what), best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// A bound was requested outside the regime where it holds.
class HypothesisError : public Error {
 public:
  HypothesisError(const std::string& condition, const std::string& what)
      : Error(ErrorKind::hypothesis_violated, what), condition_(condition) {}

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

}  // namespace qhpm

#endif  // QHPM_ERROR_HPP_
