#pragma once

#include <stdexcept>
#include <string>

namespace rotrad {

/// Base for every error raised by the library. `code()` is a short
/// machine-readable tag ("domain", "regime", "accuracy", ...) that the CLI
/// maps to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error("domain", msg) {}
};

// Tabulated data queried outside its grid.
class RangeError : public Error {
 public:
  explicit RangeError(const std::string& msg) : Error("range", msg) {}
};

// Surface-mode pole of a response factor.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& msg) : Error("singularity", msg) {}
};

// Small-radius / slow-rotation validity guard violated.
class RegimeError : public Error {
 public:
  explicit RegimeError(const std::string& msg) : Error("regime", msg) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& msg) : Error("unsupported", msg) {}
};

// Adaptive quadrature ran out of panels; carries the partial estimate.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& msg, double partial, double error_estimate)
      : Error("accuracy", msg), partial_(partial), error_(error_estimate) {}

  double partial_result() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double partial_;
  double error_;
};

// Two independent evaluation routes of the same quantity disagree.
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& msg) : Error("consistency", msg) {}
};

class StiffnessError : public Error {
 public:
  explicit StiffnessError(const std::string& msg) : Error("stiffness", msg) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0)
      : Error("parse", line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace rotrad
