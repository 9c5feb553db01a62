#pragma once

#include <span>
#include <vector>

#include "hypercon/grid.hpp"

namespace hypercon {

/// Weighted Dirichlet-form (plus optional potential) operator on a grid,
/// stored in the symmetrized representation
///
///   S = W^{-1/2} T W^{-1/2} + diag(V),
///
/// where T is the flux-form stiffness matrix with geometric-mean midpoint
/// densities b_{i+1/2} = sqrt(rho^2_i rho^2_{i+1}) and homogeneous Dirichlet
/// ghost faces at both ends, and W = diag(quadrature weights).  S is
/// symmetric tridiagonal and has the same spectrum as the weighted operator;
/// functions map to the symmetrized frame by f -> W^{1/2} f.
struct TridiagonalOperator {
  WeightedGridMeasure measure;
  std::vector<double> diag;     // S diagonal
  std::vector<double> offdiag;  // S off-diagonal, n-1 entries
  std::vector<double> potential;

  int size() const { return static_cast<int>(diag.size()); }

  /// (A f)_i in the plain function representation.
  std::vector<double> apply(std::span<const double> f) const;

  /// <A f, g>_{L^2(m)}.
  double form(std::span<const double> f, std::span<const double> g) const;
};

TridiagonalOperator dirichlet_operator(const WeightedGridMeasure&);
TridiagonalOperator schrodinger_operator(const WeightedGridMeasure&,
                                         std::span<const double> V);

/// Discrete Dirichlet energy: sum over faces (ghost faces included) of
/// b (df/h)(dg/h) h.  Equals form() of the V = 0 operator to rounding.
double dirichlet_energy(const WeightedGridMeasure&, std::span<const double> f,
                        std::span<const double> g);

}  // namespace hypercon
