#pragma once

#include <stdexcept>
#include <string>

namespace crancache {

enum class ErrorKind {
  Validation,  ///< input violates a model invariant
  Budget,      ///< enumeration exceeds the configured candidate budget
  Numerical,   ///< residue computation is ill-conditioned
};

/// Base of every error raised by the library. Carries a category so the CLI
/// can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// Raised by exhaustive enumeration when the candidate count is too large.
/// `full_count` is the count over all L rows, `restricted_count` the count
/// over rows 1..L' that would actually be enumerated.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, double full_count, double restricted_count)
      : Error(ErrorKind::Budget, what), full_count_(full_count), restricted_count_(restricted_count) {}
  double full_count() const noexcept { return full_count_; }
  double restricted_count() const noexcept { return restricted_count_; }

 private:
  double full_count_;
  double restricted_count_;
};

}  // namespace crancache
