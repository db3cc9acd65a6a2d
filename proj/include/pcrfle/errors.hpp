#pragma once

#include <stdexcept>
#include <string>

namespace pcrfle {

/// Error families. Each one maps to a distinct CLI exit code.
enum class ErrorKind { input, tuning, solver, io };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
public:
  explicit InvalidInput(const std::string &what) : Error(ErrorKind::input, what) {}
};

class TuningError : public Error {
public:
  explicit TuningError(const std::string &what) : Error(ErrorKind::tuning, what) {}
};

/// Eigensolver failure; carries the worst residual seen when it gave up.
class SolverError : public Error {
public:
  SolverError(const std::string &what, double worst_residual)
      : Error(ErrorKind::solver, what), worst_residual_(worst_residual) {}

  double worst_residual() const noexcept { return worst_residual_; }

private:
  double worst_residual_;
};

class IoError : public Error {
public:
  explicit IoError(const std::string &what) : Error(ErrorKind::io, what) {}
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::input: return 2;
  case ErrorKind::tuning: return 3;
  case ErrorKind::solver: return 4;
  case ErrorKind::io: return 5;
  }
  return 1;
}

inline const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::input: return "input";
  case ErrorKind::tuning: return "tuning";
  case ErrorKind::solver: return "solver";
  case ErrorKind::io: return "io";
  }
  return "unknown";
}

} // namespace pcrfle
