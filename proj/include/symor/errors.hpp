#pragma once

#include <stdexcept>
#include <string>

namespace symor {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch, odd phase-space dimension, rank request too large.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Operation called on an input that violates its documented precondition,
// e.g. a symplectic projection with a non-symplectic basis.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DecompositionError : public Error {
 public:
  DecompositionError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// No singular-value gap at the requested truncation.
class GapError : public Error {
 public:
  GapError(const std::string& what, double sigma_kept, double sigma_next)
      : Error(what), sigma_kept_(sigma_kept), sigma_next_(sigma_next) {}
  double sigma_kept() const { return sigma_kept_; }
  double sigma_next() const { return sigma_next_; }

 private:
  double sigma_kept_;
  double sigma_next_;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

class EmptyExtensionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double dt, double rcond)
      : Error(what), dt_(dt), rcond_(rcond) {}
  double dt() const { return dt_; }
  double rcond() const { return rcond_; }

 private:
  double dt_;
  double rcond_;
};

class ModeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace symor
