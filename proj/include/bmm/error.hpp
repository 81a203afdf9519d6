#pragma once

#include <stdexcept>
#include <string>

namespace bmm {

// Base of every error thrown by the library. The CLI maps NumericalError (and
// its subclasses) to exit code 3 and everything else to exit code 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class EmptyInput : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class ShapeError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
public:
  using Error::Error;
};

class UnsupportedAlpha : public Error {
public:
  using Error::Error;
};

class AtomError : public Error {
public:
  using Error::Error;
};

class BudgetError : public Error {
public:
  using Error::Error;
};

class UndefinedMean : public Error {
public:
  using Error::Error;
};

class OverflowError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

class QuadratureError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace bmm
