#pragma once

#include <stdexcept>
#include <string>

namespace cvb {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside a function's mathematical domain (e.g. |x| > 1 for T_j).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed call: bad sizes, zero counts, mismatched dimensions.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a data-set invariant (duplicate nodes, non-finite values).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A term vector set cannot be orthogonalized (zero leading vector).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Malformed document or data file. Message carries line/field context.
class ParseError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvb
