#pragma once

#include <stdexcept>
#include <string>

namespace moment_support {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A basis or matrix size does not fit the platform integer range.
class SizingError : public Error {
 public:
  using Error::Error;
};

/// A measure, interval, or configuration parameter is outside its domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Not enough moments are available for the requested construction.
class OrderError : public Error {
 public:
  OrderError(const std::string& what, int required_order, int available_order)
      : Error(what),
        required_order_(required_order),
        available_order_(available_order) {}

  int required_order() const noexcept { return required_order_; }
  int available_order() const noexcept { return available_order_; }

 private:
  int required_order_;
  int available_order_;
};

/// Mismatched dimensions or references to undeclared entities.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A multiplier polynomial has a degree that the certificate cannot absorb.
class DegreeError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not available for this input family.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace moment_support
