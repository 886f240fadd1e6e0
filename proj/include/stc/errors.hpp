#pragma once

#include <stdexcept>
#include <string>

namespace stc {

/// Status codes shared by the exception hierarchy, the C API and the CLI
/// exit codes (0 success, 2 config, 3 synthesis, 4 verification, 5 coverage).
enum class Status : int {
  ok = 0,
  internal = 1,
  config_error = 2,
  synthesis_error = 3,
  verification_error = 4,
  coverage_error = 5,
};

class Error : public std::runtime_error {
 public:
  Error(Status status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  Status status() const { return status_; }

 private:
  Status status_;
};

/// Bad user-supplied configuration: malformed files, invalid parameters,
/// mismatched artifact/model pairs.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Status::config_error, what) {}
};

/// Synthesis cannot produce a sound result: unbounded working set
/// (compactness assumption violated), infeasible radius, degenerate fit.
class SynthesisError : public Error {
 public:
  explicit SynthesisError(const std::string& what) : Error(Status::synthesis_error, what) {}
};

/// A posteriori check failed: negative verification margin after refits,
/// inconsistent coefficients at a query point.
class VerificationError : public Error {
 public:
  explicit VerificationError(const std::string& what) : Error(Status::verification_error, what) {}
};

/// A state fell outside the certified region coverage.  `b1_failed` tells
/// which inclusion broke: the cone ball (true) or the first-dwell bound.
class CoverageError : public Error {
 public:
  CoverageError(bool b1_failed, const std::string& what)
      : Error(Status::coverage_error, what), b1_failed_(b1_failed) {}
  bool b1_failed() const { return b1_failed_; }

 private:
  bool b1_failed_;
};

/// Caller broke an interface contract (dimension mismatch, precondition).
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what) : Error(Status::internal, what) {}
};

/// Evaluation outside a function's mathematical domain (w <= 0, zero point).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(Status::internal, what) {}
};

/// Numerical blow-up during integration; carries the first bad time.
class DivergenceError : public Error {
 public:
  DivergenceError(double t, const std::string& what)
      : Error(Status::internal, what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace stc
