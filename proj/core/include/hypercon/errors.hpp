#pragma once

#include <stdexcept>
#include <string>

namespace hypercon {

/// Argument outside the range a formula or operation is defined on.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Measure with no mass, or vanishing density where an operator needs it.
struct DegenerateMeasure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFinitePotential : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time step too coarse for the accuracy contract of the propagator.
struct StepSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A log-space accumulation left the representable range.
struct OverflowGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// No admissible parameter choice exists for a constructive step.
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A pointwise hypothesis failed on the probe grid; carries the witness.
struct ConditionFailed : std::runtime_error {
  ConditionFailed(const std::string& what, double x)
      : std::runtime_error(what), violating_x(x) {}
  double violating_x;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Widening test detected geometric growth where finiteness was required.
struct TailDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The grid cannot certify a threshold condition at its resolution.
struct InfeasibleOnGrid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hypercon
