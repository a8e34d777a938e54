#pragma once

#include <stdexcept>
#include <string>

namespace qpersist {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for bad user input (files, configuration). The CLI maps these to
/// exit code 2; every other Error maps to 3.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class TooManyPoints : public InputError {
 public:
  using InputError::InputError;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyMask : public Error {
 public:
  using Error::Error;
};

class ScaleOrder : public InputError {
 public:
  using InputError::InputError;
};

class ZeroXi : public InputError {
 public:
  using InputError::InputError;
};

class BadM : public InputError {
 public:
  using InputError::InputError;
};

class NotASubset : public Error {
 public:
  using Error::Error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class NotSquare : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class EmptyBasis : public Error {
 public:
  using Error::Error;
};

class NoMarkedStates : public Error {
 public:
  using Error::Error;
};

class AmbiguousRounding : public Error {
 public:
  using Error::Error;
};

}  // namespace qpersist
