#pragma once

#include <stdexcept>
#include <string>

namespace fpump {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The LP solver gave up (numerical trouble even after the Bland fallback).
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// The LP relaxation of the instance is empty.
class InstanceInfeasible : public Error {
 public:
  using Error::Error;
};

/// The certificate LP optimum is not strictly positive, i.e. the point
/// actually lies in the binary projection.
class NotACertificate : public Error {
 public:
  using Error::Error;
};

/// Iterated alternating projection hit its cap without reaching a fixpoint.
class NoFixpoint : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

class UnsupportedSection : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace fpump
