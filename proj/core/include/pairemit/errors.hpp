#pragma once

#include <stdexcept>
#include <string>

namespace pairemit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation exactly on a logarithmic singularity of a Green function.
class SingularArgument : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The effective Green function vanishes at half the pump frequency, so no
/// finite velocity nulls the resolvent there.
class NoResonance : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
};

/// Mode amplitudes left the configured bound during time integration.
class IntegratorUnstable : public Error {
 public:
  using Error::Error;
};

}  // namespace pairemit
