#pragma once

#include <stdexcept>
#include <string>

namespace lteu {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed solver input (e.g. preference lists that are not permutations).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numeric routine failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration requested on an instance that is too large.
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace lteu
