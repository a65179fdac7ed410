#pragma once

#include <stdexcept>
#include <string>

namespace ldwa {

// Tensor or parameter dimensions do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value lies outside the domain an operation accepts (e.g. a non-binary
// state target).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or inconsistent input data (CSV files, config files,
// checkpoints).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training diverged or produced non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad command-line flags or configuration content.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ldwa
