#pragma once

#include <stdexcept>
#include <string>

namespace exactrank {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A size guard refused the computation (CLI exit code 3).
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace exactrank
