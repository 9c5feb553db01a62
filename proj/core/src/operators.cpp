#include "hypercon/operators.hpp"

#include <cmath>

namespace hypercon {

namespace {

// Interior face densities (geometric mean) plus the two Dirichlet ghost
// faces, which reuse the boundary node density.
struct Faces {
  std::vector<double> b;  // n-1 interior faces
  double left, right;
};

Faces face_densities(const WeightedGridMeasure& m) {
  const int n = m.size();
  Faces f;
  f.b.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i) f.b[i] = std::sqrt(m.density[i] * m.density[i + 1]);
  f.left = m.density.front();
  f.right = m.density.back();
  return f;
}

void require_interior_positive(const WeightedGridMeasure& m) {
  for (int i = 1; i + 1 < m.size(); ++i)
    if (!(m.density[i] > 0.0))
      throw DegenerateMeasure("operator undefined: interior density vanishes");
  if (!(m.density.front() > 0.0) || !(m.density.back() > 0.0))
    throw DegenerateMeasure("operator undefined: boundary density vanishes");
}

}  // namespace

TridiagonalOperator dirichlet_operator(const WeightedGridMeasure& m) {
  require_interior_positive(m);
  const int n = m.size();
  const double h = m.grid.h;
  const Faces f = face_densities(m);

  TridiagonalOperator op;
  op.measure = m;
  op.potential.assign(n, 0.0);
  op.diag.resize(n);
  op.offdiag.resize(n - 1);

  std::vector<double> tdiag(n);
  tdiag[0] = (f.left + f.b[0]) / h;
  tdiag[n - 1] = (f.b[n - 2] + f.right) / h;
  for (int i = 1; i + 1 < n; ++i) tdiag[i] = (f.b[i - 1] + f.b[i]) / h;

  for (int i = 0; i < n; ++i) op.diag[i] = tdiag[i] / m.weights[i];
  for (int i = 0; i + 1 < n; ++i)
    op.offdiag[i] = -(f.b[i] / h) / std::sqrt(m.weights[i] * m.weights[i + 1]);
  return op;
}

TridiagonalOperator schrodinger_operator(const WeightedGridMeasure& m,
                                         std::span<const double> V) {
  if (static_cast<int>(V.size()) != m.size())
    throw DomainError("schrodinger_operator: potential size mismatch");
  for (double v : V)
    if (!std::isfinite(v))
      throw NonFinitePotential("schrodinger_operator: potential must be finite");
  TridiagonalOperator op = dirichlet_operator(m);
  for (int i = 0; i < op.size(); ++i) {
    op.diag[i] += V[i];
    op.potential[i] = V[i];
  }
  return op;
}

std::vector<double> TridiagonalOperator::apply(std::span<const double> f) const {
  const int n = size();
  if (static_cast<int>(f.size()) != n) throw DomainError("apply: size mismatch");
  // A = W^{-1/2} S W^{1/2}
  std::vector<double> phi(n), out(n);
  for (int i = 0; i < n; ++i) phi[i] = f[i] * std::sqrt(measure.weights[i]);
  for (int i = 0; i < n; ++i) {
    double acc = diag[i] * phi[i];
    if (i > 0) acc += offdiag[i - 1] * phi[i - 1];
    if (i + 1 < n) acc += offdiag[i] * phi[i + 1];
    out[i] = acc / std::sqrt(measure.weights[i]);
  }
  return out;
}

double TridiagonalOperator::form(std::span<const double> f,
                                 std::span<const double> g) const {
  const int n = size();
  if (static_cast<int>(f.size()) != n || static_cast<int>(g.size()) != n)
    throw DomainError("form: size mismatch");
  double acc = dirichlet_energy(measure, f, g);
  for (int i = 0; i < n; ++i) acc += potential[i] * f[i] * g[i] * measure.weights[i];
  return acc;
}

double dirichlet_energy(const WeightedGridMeasure& m, std::span<const double> f,
                        std::span<const double> g) {
  const int n = m.size();
  if (static_cast<int>(f.size()) != n || static_cast<int>(g.size()) != n)
    throw DomainError("dirichlet_energy: size mismatch");
  const double h = m.grid.h;
  const Faces fb = face_densities(m);
  double acc = fb.left * f[0] * g[0] / h + fb.right * f[n - 1] * g[n - 1] / h;
  for (int i = 0; i + 1 < n; ++i)
    acc += fb.b[i] * (f[i + 1] - f[i]) * (g[i + 1] - g[i]) / h;
  return acc;
}

}  // namespace hypercon
