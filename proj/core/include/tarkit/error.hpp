#pragma once

#include <stdexcept>
#include <string>

namespace tarkit {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A caller passed a value outside an operation's documented domain.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// An input file could not be parsed; the message carries file/line context.
class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace tarkit
