#pragma once

#include <stdexcept>
#include <string>

namespace pdolab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad dimension, empty box, support violations, bad grids.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Non-finite quadrature values or a failed dense factorization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Requested matrix size exceeds the configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace pdolab
