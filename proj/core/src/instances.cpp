#include "hypercon/instances.hpp"

#include <cmath>

#include "hypercon/potentials.hpp"

namespace hypercon {

namespace {

// Odd quintic p(x) = alpha x + beta x^3 + gamma x^5 on [-1, 1] matching
// value, slope and curvature of -sgn(x) log(1+x^2) at x = 1.
struct TiltBlend {
  double alpha, beta, gamma;
  TiltBlend() {
    const double l2 = std::log(2.0);
    gamma = 3.0 * (1.0 - l2) / 8.0;
    beta = -10.0 * gamma / 3.0;
    alpha = -l2 - beta - gamma;
  }
  double f(double x) const { return x * (alpha + x * x * (beta + gamma * x * x)); }
  double df(double x) const {
    return alpha + x * x * (3.0 * beta + 5.0 * gamma * x * x);
  }
  double d2f(double x) const { return x * (6.0 * beta + 20.0 * gamma * x * x); }
};

}  // namespace

Instance make_gaussian_quadratic(double omega, double a, double L, int n,
                                 double kappa, double nu) {
  const Grid g = Grid::uniform(-L, L, n);
  WeightedGridMeasure m = build_measure(g, gaussian_density(omega), true);
  const LsiParams params{0.5 / omega, kappa, nu};
  return make_instance("gaussian_quadratic", params, std::move(m),
                       sample(g, harmonic_potential(a)));
}

TiltProfile bounded_tilt_profile(const Grid& g) {
  const TiltBlend q;
  TiltProfile out;
  out.F.resize(g.n);
  out.V.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.nodes[i];
    double F, Fp, Fpp;
    if (std::abs(x) <= 1.0) {
      F = q.f(x);
      Fp = q.df(x);
      Fpp = q.d2f(x);
    } else {
      const double s = x > 0.0 ? 1.0 : -1.0;
      const double d = 1.0 + x * x;
      F = -s * std::log(d);
      Fp = -s * 2.0 * x / d;
      Fpp = -s * 2.0 * (1.0 - x * x) / (d * d);
    }
    out.F[i] = F;
    // base measure is gamma (c = 1/2): grad*grad F = -F'' + 2 x F'
    out.V[i] = -Fpp + Fp * Fp + 2.0 * x * Fp;
  }
  double vmin = out.V[0], vmax = out.V[0];
  for (double v : out.V) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  out.osc_v = vmax - vmin;
  return out;
}

Instance make_bounded_tilt(double L, int n, double kappa, double nu) {
  const Grid g = Grid::uniform(-L, L, n);
  WeightedGridMeasure m = build_measure(g, gaussian_density(1.0), true);
  TiltProfile prof = bounded_tilt_profile(g);
  const LsiParams params{0.5, kappa, nu};
  return make_instance("bounded_tilt", params, std::move(m), std::move(prof.V));
}

Instance make_quartic_relative(double L, int n, double kappa, double nu) {
  const Grid g = Grid::uniform(-L, L, n);
  // x0 = 1: core F = x^2/2 (b = 1); tail F = x^3/3 + 1/6, so that F, F' match.
  auto F = [](double x) {
    const double ax = std::abs(x);
    return ax <= 1.0 ? 0.5 * x * x : ax * ax * ax / 3.0 + 1.0 / 6.0;
  };
  WeightedGridMeasure m =
      build_measure(g, [&](double x) { return std::exp(-2.0 * F(x)); }, true);
  // V - W: 2|x| on the tail, 1 - x^2 + x^4 on the core.
  std::vector<double> V(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.nodes[i];
    const double ax = std::abs(x);
    V[i] = ax <= 1.0 ? 1.0 - x * x + x * x * x * x : 2.0 * ax;
  }
  const LsiParams params{0.5, kappa, nu};
  return make_instance("quartic_relative", params, std::move(m), std::move(V));
}

Instance make_malrieu_roberto_relative(double beta, double L, int n, double kappa,
                                       double nu) {
  if (!(std::abs(beta) < 2.0))
    throw DomainError("malrieu_roberto: |beta| must be < 2");
  const Grid g = Grid::uniform(-L, L, n);
  const double rho = 2.0 - std::abs(beta);
  WeightedGridMeasure m0 = build_measure(
      g, [&](double x) { return std::exp(-rho * x * x); }, true);
  std::vector<double> V1(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.nodes[i];
    const double Fp = 2.0 * x + beta * (std::sin(x) + x * std::cos(x));
    const double Fpp = 2.0 + beta * (2.0 * std::cos(x) - x * std::sin(x));
    V1[i] = -Fpp + Fp * Fp - rho * rho * x * x;
  }
  const LsiParams params{1.0 / rho, kappa, nu};
  return make_instance("malrieu_roberto_relative", params, std::move(m0),
                       std::move(V1));
}

Instance make_cosine_ripple(double amplitude, double L, int n, double kappa,
                            double nu) {
  const Grid g = Grid::uniform(-L, L, n);
  WeightedGridMeasure m = build_measure(g, gaussian_density(1.0), true);
  std::vector<double> V(g.n);
  for (int i = 0; i < g.n; ++i) V[i] = amplitude * std::cos(g.nodes[i]);
  const LsiParams params{0.5, kappa, nu};
  return make_instance("cosine_ripple", params, std::move(m), std::move(V));
}

std::vector<Instance> standard_battery() {
  std::vector<Instance> battery;
  battery.push_back(make_gaussian_quadratic());
  battery.push_back(make_bounded_tilt());
  battery.push_back(make_quartic_relative());
  battery.push_back(make_malrieu_roberto_relative());
  return battery;
}

}  // namespace hypercon
