#pragma once

#include <stdexcept>
#include <string>

namespace finharm {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different groups, or a length does not match the group.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two operands disagree on a convention they must share (e.g. scaling d).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A builder parameter violates the constraint under which the construction works.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The request would enumerate more points than the configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// The requested model, descriptor or function family has no implementation.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A numerical evaluation produced a non-finite or otherwise unusable value.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace finharm
