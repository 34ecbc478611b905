#pragma once

#include <stdexcept>
#include <string>

namespace fascopula {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A pivot fell below -1e-10 during factorization and repair was not allowed.
class NotPositiveSemidefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Direct Jakes simulation needs 2m to be a positive integer.
class UnsupportedShape : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rank statistics are undefined when a column is constant.
class DegenerateColumn : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fascopula
