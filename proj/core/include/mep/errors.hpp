#pragma once

#include <stdexcept>
#include <string>

namespace mep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by caller-supplied data (bad grid, non-finite
/// samples, mismatched components, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An iterative solve did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A time integration produced non-finite data or exceeded the blow-up
/// thresholds.
class BlowupError : public Error {
 public:
  BlowupError(const std::string& what, double t, double norm)
      : Error(what), t_(t), norm_(norm) {}
  double time() const noexcept { return t_; }
  double norm() const noexcept { return norm_; }

 private:
  double t_;
  double norm_;
};

/// The flow map stopped being an orientation-preserving diffeomorphism.
class BreakdownError : public Error {
 public:
  BreakdownError(const std::string& what, double min_jacobian)
      : Error(what), min_jacobian_(min_jacobian) {}
  double min_jacobian() const noexcept { return min_jacobian_; }

 private:
  double min_jacobian_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SnapshotError : public Error {
 public:
  using Error::Error;
};

}  // namespace mep
