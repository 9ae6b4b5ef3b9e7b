#ifndef CHRONOSQUEEZE_ERRORS_H_
#define CHRONOSQUEEZE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace chronosqueeze {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain where a quantity is defined (sampled pulse
/// grid, map table, negative variance, ...).
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedShapeError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// The adaptive integrator could not reach the requested end point.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// The conformal flow is not strictly monotone on the requested grid.
class InvalidRegimeError : public Error {
 public:
  using Error::Error;
};

/// The detection window (probe support mapped through the conformal map)
/// does not fit into the tabulated map or the transform buffer.
class WindowError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  FitError(const std::string& what, double residual_rms)
      : Error(what), residual_rms_(residual_rms) {}
  double residual_rms() const { return residual_rms_; }

 private:
  double residual_rms_;
};

/// Causality or configuration validity gate failure.
class ValidityError : public Error {
 public:
  using Error::Error;
};

}  // namespace chronosqueeze

#endif  // CHRONOSQUEEZE_ERRORS_H_
