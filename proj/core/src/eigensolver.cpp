#include "hypercon/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tridiag_lu.hpp"

namespace hypercon {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Bracket {
  double lo, hi;
};

Bracket gershgorin(std::span<const double> d, std::span<const double> e) {
  const int n = static_cast<int>(d.size());
  double lo = d[0], hi = d[0];
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e[i - 1]);
    if (i + 1 < n) r += std::abs(e[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  return {lo, hi};
}

int count_below(std::span<const double> d, std::span<const double> e, double x) {
  const int n = static_cast<int>(d.size());
  int count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (int i = 1; i < n; ++i) {
    if (q == 0.0) q = kEps * (std::abs(e[i - 1]) + kEps);
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

double bisect_kth(std::span<const double> d, std::span<const double> e, int k,
                  double rel_tol) {
  Bracket b = gershgorin(d, e);
  const double scale = std::max({std::abs(b.lo), std::abs(b.hi), 1.0});
  double lo = b.lo - 2.0 * kEps * scale;
  double hi = b.hi + 2.0 * kEps * scale;
  while (hi - lo > rel_tol * std::max(1.0, std::max(std::abs(lo), std::abs(hi)))) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (count_below(d, e, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

detail::TridiagLU shifted_lu(std::span<const double> d, std::span<const double> e,
                             double shift) {
  const int n = static_cast<int>(d.size());
  std::vector<double> dd(n), band(e.begin(), e.end());
  for (int i = 0; i < n; ++i) dd[i] = d[i] - shift;
  return detail::TridiagLU(band, std::move(dd), band);
}

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

// Residual ||(S - lambda) phi|| for a unit vector phi.
double eigen_residual(std::span<const double> d, std::span<const double> e,
                      double lambda, std::span<const double> phi) {
  const int n = static_cast<int>(d.size());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = (d[i] - lambda) * phi[i];
    if (i > 0) r += e[i - 1] * phi[i - 1];
    if (i + 1 < n) r += e[i] * phi[i + 1];
    acc += r * r;
  }
  return std::sqrt(acc);
}

std::vector<double> inverse_iteration(std::span<const double> d,
                                      std::span<const double> e, double lambda) {
  const int n = static_cast<int>(d.size());
  const Bracket g = gershgorin(d, e);
  const double matscale = std::max(1.0, g.hi - g.lo);
  // Tiny shift off the eigenvalue keeps the factorization well defined.
  const detail::TridiagLU solver = shifted_lu(d, e, lambda + 1e-3 * kEps * matscale);
  std::vector<double> x(n, 1.0 / std::sqrt(double(n)));
  const double tol = 32.0 * std::sqrt(double(n)) * kEps * matscale;
  const int budget = 50;
  for (int it = 0; it < budget; ++it) {
    std::vector<double> y = solver.solve(x);
    const double ny = norm2(y);
    if (!std::isfinite(ny) || ny == 0.0)
      throw ConvergenceFailure("inverse iteration: solve degenerated");
    for (double& v : y) v /= ny;
    x = std::move(y);
    if (eigen_residual(d, e, lambda, x) <= tol) return x;
  }
  if (eigen_residual(d, e, lambda, x) <= 1e-8 * matscale) return x;
  throw ConvergenceFailure(
      "inverse iteration: residual did not converge within budget "
      "(near-degenerate discretization)");
}

// The raw eigenvector carries O(eps * ||phi||) absolute noise, which destroys
// the exponentially small tail entries.  Beyond the point where phi drops
// under tau * max, rebuild the tail from the three-term recurrence run inward
// from the boundary (the direction in which the decaying solution dominates)
// and stitch it on, tracking logs to avoid overflow.
void refine_tails(std::span<const double> d, std::span<const double> e,
                  double lambda, std::vector<double>& phi) {
  const int n = static_cast<int>(d.size());
  const int peak = static_cast<int>(
      std::max_element(phi.begin(), phi.end(),
                       [](double a, double b) { return std::abs(a) < std::abs(b); }) -
      phi.begin());
  if (phi[peak] < 0.0)
    for (double& v : phi) v = -v;
  const double tau = 1e-5 * phi[peak];

  // Right tail.
  {
    int stitch = n;
    for (int i = peak; i < n; ++i)
      if (!(phi[i] > tau)) {
        stitch = i;
        break;
      }
    if (stitch < n - 2) {
      std::vector<double> logs(n, 0.0);
      double cur = 1.0, prev = 0.0;  // prev = ghost value past the boundary
      double acc = 0.0;
      logs[n - 1] = 0.0;
      bool good = true;
      for (int i = n - 1; i > stitch; --i) {
        // row i: e[i-1] phi[i-1] + (d[i]-lambda) phi[i] + e[i] phi[i+1] = 0
        const double up = (i + 1 < n) ? prev : 0.0;
        double next = -((d[i] - lambda) * cur + ((i + 1 < n) ? e[i] * up : 0.0)) / e[i - 1];
        if (!(next > 0.0) || !std::isfinite(next)) {
          good = false;
          break;
        }
        prev = cur;
        cur = next;
        if (cur > 1e200) {
          acc += std::log(cur);
          prev /= cur;
          cur = 1.0;
        }
        logs[i - 1] = std::log(cur) + acc;
      }
      if (good && phi[stitch] > 0.0) {
        const double match = std::log(phi[stitch]) - logs[stitch];
        for (int i = stitch + 1; i < n; ++i) phi[i] = std::exp(logs[i] + match);
      }
    }
  }

  // Left tail (mirror).
  {
    int stitch = -1;
    for (int i = peak; i >= 0; --i)
      if (!(phi[i] > tau)) {
        stitch = i;
        break;
      }
    if (stitch > 1) {
      std::vector<double> logs(n, 0.0);
      double cur = 1.0, prev = 0.0;
      double acc = 0.0;
      logs[0] = 0.0;
      bool good = true;
      for (int i = 0; i < stitch; ++i) {
        const double dn = (i > 0) ? prev : 0.0;
        double next = -((d[i] - lambda) * cur + ((i > 0) ? e[i - 1] * dn : 0.0)) / e[i];
        if (!(next > 0.0) || !std::isfinite(next)) {
          good = false;
          break;
        }
        prev = cur;
        cur = next;
        if (cur > 1e200) {
          acc += std::log(cur);
          prev /= cur;
          cur = 1.0;
        }
        logs[i + 1] = std::log(cur) + acc;
      }
      if (good && phi[stitch] > 0.0) {
        const double match = std::log(phi[stitch]) - logs[stitch];
        for (int i = 0; i < stitch; ++i) phi[i] = std::exp(logs[i] + match);
      }
    }
  }

  const double nn = norm2(phi);
  for (double& v : phi) v /= nn;
}

}  // namespace

int sturm_count_below(std::span<const double> diag, std::span<const double> offdiag,
                      double x) {
  return count_below(diag, offdiag, x);
}

double eigenvalue(const TridiagonalOperator& op, int k, double rel_tol) {
  if (k < 0 || k >= op.size()) throw DomainError("eigenvalue: index out of range");
  return bisect_kth(op.diag, op.offdiag, k, rel_tol);
}

GroundState ground_state(const TridiagonalOperator& op) {
  const int n = op.size();
  GroundState gs;
  gs.lambda0 = bisect_kth(op.diag, op.offdiag, 0, 1e-12);
  gs.lambda1 = bisect_kth(op.diag, op.offdiag, 1, 1e-12);

  std::vector<double> phi = inverse_iteration(op.diag, op.offdiag, gs.lambda0);
  refine_tails(op.diag, op.offdiag, gs.lambda0, phi);
  gs.gap = gs.lambda1 - gs.lambda0;

  // Back to the function representation; ||psi||_{L^2(m)} = ||phi||_2 = 1.
  gs.psi.resize(n);
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    gs.psi[i] = phi[i] / std::sqrt(op.measure.weights[i]);
    mean += gs.psi[i] * op.measure.weights[i];
  }
  if (mean < 0.0)
    for (double& v : gs.psi) v = -v;
  return gs;
}

}  // namespace hypercon
