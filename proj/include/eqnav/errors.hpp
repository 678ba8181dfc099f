// Exception types raised by the group primitives and the filters.

#pragma once

#include <stdexcept>
#include <string>

namespace eqnav {

/// Base class for every recoverable numeric failure in the library. Harness
/// code catches this to flag a run as diverged instead of aborting.
class EqnavError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rotation logarithm requested too close to the pi chart boundary.
class AngleNearPi : public EqnavError {
 public:
  AngleNearPi() : EqnavError("rotation angle too close to pi for log") {}
};

/// A matrix handed to vee (or a pose constructor) does not have the required
/// algebra/group structure.
class StructureViolation : public EqnavError {
 public:
  explicit StructureViolation(const std::string& what) : EqnavError(what) {}
};

/// Filter residual left the local chart around the origin; the estimate has
/// effectively diverged.
class ChartBoundary : public EqnavError {
 public:
  ChartBoundary() : EqnavError("residual outside the filter chart") {}
};

/// A state or covariance entry became NaN/Inf during integration.
class NonFiniteState : public EqnavError {
 public:
  NonFiniteState() : EqnavError("non-finite entries in filter state") {}
};

/// Innovation covariance could not be factorized.
class SingularInnovationCov : public EqnavError {
 public:
  SingularInnovationCov() : EqnavError("innovation covariance is singular") {}
};

/// Malformed configuration file or option value.
class ConfigError : public EqnavError {
 public:
  explicit ConfigError(const std::string& what) : EqnavError(what) {}
};

}  // namespace eqnav
