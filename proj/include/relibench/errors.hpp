#pragma once

#include <stdexcept>

namespace relibench {

// Invalid arguments or configuration supplied by the caller.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed, inconsistent, or missing input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lookup of an identifier that is not present.
class LookupError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace relibench
