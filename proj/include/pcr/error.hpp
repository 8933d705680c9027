#pragma once

#include <stdexcept>
#include <string>

namespace pcr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported input file (PLY, BPC, camera path).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Mutually inconsistent render or command configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant, e.g. a framebuffer entry pointing past the
/// color buffer. Indicates a bug, not bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcr
