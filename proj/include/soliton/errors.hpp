#pragma once

#include <stdexcept>
#include <string>

namespace soliton {

/// Base class for numerical failures raised by the solvers. Precondition
/// violations use std::invalid_argument / std::domain_error instead.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An integrator step produced a slope outside [0, 1) or a non-finite value.
class StepFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Newton iteration stalled or hit its iteration cap.
class NoConvergence : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A discrete slope reached |slope| >= 1.
class SpacelikeViolation : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Explicit time step exceeds the parabolic stability bound.
class CflViolation : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Evaluation point beyond the profile horizon.
class OutOfRange : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace soliton
