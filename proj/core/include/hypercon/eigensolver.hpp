#pragma once

#include <span>
#include <vector>

#include "hypercon/operators.hpp"

namespace hypercon {

/// Lowest eigenpair of a Schrodinger / Dirichlet-form operator, with the
/// first spectral gap.  psi is L^2(m)-normalized with positive mean.
struct GroundState {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double gap = 0.0;
  std::vector<double> psi;
};

/// k-th smallest eigenvalue (k = 0, 1, ...) by Sturm-sequence bisection.
double eigenvalue(const TridiagonalOperator&, int k, double rel_tol = 1e-12);

/// Number of eigenvalues strictly below x (exposed for tests).
int sturm_count_below(std::span<const double> diag, std::span<const double> offdiag,
                      double x);

/// Two lowest eigenvalues by Sturm bisection, ground eigenvector by inverse
/// iteration with an outward-recurrence tail refinement that keeps the
/// exponentially small entries multiplicatively accurate.
GroundState ground_state(const TridiagonalOperator&);

}  // namespace hypercon
