#pragma once

#include <stdexcept>
#include <string>

namespace wallstokes {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kernel evaluated at (or within the guard radius of) its source point.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the half-space or otherwise outside a function's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Sphere overlap, wall contact or collapsed arm.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// The self-propulsion balance matrix is numerically singular.
class DegenerateConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A balance row that should vanish by symmetry did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference stencil leaves the admissible set.
class StepTooLargeError : public Error {
 public:
  using Error::Error;
};

/// The state left the admissible set during integration or planning.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// The start state lies on the rank-deficient set (swimmer perpendicular to
/// the wall), where no stroke can change x or theta.
class NotLocallyControllableError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wallstokes
