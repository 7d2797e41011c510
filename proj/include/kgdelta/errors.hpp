#pragma once

#include <stdexcept>
#include <string>

namespace kgdelta {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its mathematical domain (m <= 0, p <= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The (m, alpha, gamma, omega) combination violates m^2 - omega^2 > beta^2/4
/// (or sits within the 1e-14 safety margin of the boundary).
class NotAdmissible : public Error {
 public:
  using Error::Error;
};

/// Grid construction constraints violated (N odd, too small, L <= 0, ...).
class BadGrid : public Error {
 public:
  using Error::Error;
};

/// Weighted-norm parameter mu does not exceed mu0 = max(0, -gamma/2).
class MuTooSmall : public Error {
 public:
  using Error::Error;
};

/// Numeric differentiation stencil would leave the admissible omega interval.
class StencilOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Root bracket endpoints do not straddle a sign change.
class NoSignChange : public Error {
 public:
  using Error::Error;
};

/// A linear solve hit a (near-)zero pivot.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Fixed-point iteration failed to contract within the iteration budget.
class NoContraction : public Error {
 public:
  using Error::Error;
};

/// The spectral map lambda -> lambda + lambda omega^2/(1 - lambda) was
/// evaluated at its pole lambda = 1.
class PoleAtOne : public Error {
 public:
  using Error::Error;
};

/// A time step or quadrature produced a non-finite value or exhausted its
/// subdivision budget.
class SolverFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace kgdelta
