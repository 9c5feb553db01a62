#include <cmath>

#include "doctest.h"
#include "hypercon/eigensolver.hpp"
#include "hypercon/potentials.hpp"
#include "hypercon/semigroup.hpp"

using namespace hypercon;

namespace {

WeightedGridMeasure gamma_measure(int n = 1601, double L = 8.0) {
  return build_measure(Grid::uniform(-L, L, n), gaussian_density(1.0), true);
}

double l2m_error(const WeightedGridMeasure& m, std::span<const double> f,
                 std::span<const double> g) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += (f[i] - g[i]) * (f[i] - g[i]) * m.weights[i];
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("drift semigroup decays its first eigenfunction at rate 2") {
  const WeightedGridMeasure m = gamma_measure();
  const TridiagonalOperator A = dirichlet_operator(m);
  const SemigroupRun run = propagate(A, m.grid.nodes, 1.0, 1e-3, {}, 1);
  std::vector<double> ref(m.size());
  for (int i = 0; i < m.size(); ++i) ref[i] = std::exp(-2.0) * m.grid.nodes[i];
  CHECK(l2m_error(m, run.states.back(), ref) < 1e-4);
}

TEST_CASE("constants are invariant under the drift semigroup") {
  // Dirichlet truncation bends the constant only inside the boundary layer,
  // which carries e^{-L^2}-level mass.
  const WeightedGridMeasure m = gamma_measure();
  const TridiagonalOperator A = dirichlet_operator(m);
  const SemigroupRun run = propagate(A, std::vector<double>(m.size(), 1.0), 0.5,
                                     1e-3, {}, 1);
  double worst = 0.0, l2 = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    const double diff = run.states.back()[i] - 1.0;
    l2 += diff * diff * m.weights[i];
    if (std::abs(m.grid.nodes[i]) > 6.0) continue;
    worst = std::max(worst, std::abs(diff));
  }
  CHECK(worst < 1e-10);
  CHECK(std::sqrt(l2) < 1e-10);
}

TEST_CASE("eigenfunctions decay at their eigenvalue rate") {
  const WeightedGridMeasure m = gamma_measure();
  std::vector<double> V(m.size());
  for (int i = 0; i < m.size(); ++i) V[i] = 3.0 * m.grid.nodes[i] * m.grid.nodes[i];
  const TridiagonalOperator H = schrodinger_operator(m, V);
  const GroundState gs = ground_state(H);
  const SemigroupRun run = propagate(H, gs.psi, 1.0, 5e-4, {}, 1);
  std::vector<double> ref(m.size());
  for (int i = 0; i < m.size(); ++i) ref[i] = std::exp(-gs.lambda0) * gs.psi[i];
  CHECK(l2m_error(m, run.states.back(), ref) < 1e-5);
}

TEST_CASE("propagator is second order in dt") {
  // measured against a fine-step reference so the spatial bias drops out
  const WeightedGridMeasure m = gamma_measure(801);
  const TridiagonalOperator A = dirichlet_operator(m);
  const SemigroupRun fine = propagate(A, m.grid.nodes, 1.0, 2.5e-4, {}, 1);
  auto step_error = [&](double dt) {
    const SemigroupRun run = propagate(A, m.grid.nodes, 1.0, dt, {}, 1);
    return l2m_error(m, run.states.back(), fine.states.back());
  };
  const double e1 = step_error(8e-3);
  const double e2 = step_error(4e-3);
  const double e3 = step_error(2e-3);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("even initial data stays even under even potentials") {
  const WeightedGridMeasure m = gamma_measure(1201);
  std::vector<double> V(m.size()), f0(m.size());
  for (int i = 0; i < m.size(); ++i) {
    const double x = m.grid.nodes[i];
    V[i] = std::cos(x) + 0.3 * x * x;
    f0[i] = std::exp(-0.2 * x * x) * (1.0 + x * x);
  }
  const SemigroupRun run =
      propagate(schrodinger_operator(m, V), f0, 0.5, 1e-3, {}, 1);
  const auto& f = run.states.back();
  double asym = 0.0;
  for (int i = 0; i < m.size(); ++i)
    asym = std::max(asym, std::abs(f[i] - f[m.size() - 1 - i]));
  CHECK(asym < 1e-10);
}

TEST_CASE("L2 contraction with growth") {
  const WeightedGridMeasure m = gamma_measure(1201);
  std::vector<double> V(m.size()), f0(m.size());
  for (int i = 0; i < m.size(); ++i) {
    const double x = m.grid.nodes[i];
    V[i] = 0.8 * x * x - 0.4;
    f0[i] = 1.0 + std::sin(x);
  }
  const TridiagonalOperator H = schrodinger_operator(m, V);
  const double l0 = ground_state(H).lambda0;
  const std::vector<double> ps{2.0};
  const SemigroupRun run = propagate(H, f0, 1.0, 1e-3, ps, 10);
  double last = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    const double scaled = run.norm_curves.at(2.0)[k] * std::exp(l0 * run.times[k]);
    CHECK(scaled <= last * (1.0 + 1e-9));
    last = scaled;
  }
}

TEST_CASE("step-size guard") {
  const WeightedGridMeasure m = gamma_measure(1601);
  const TridiagonalOperator A = dirichlet_operator(m);
  CHECK_THROWS_AS(propagate(A, m.grid.nodes, 1.0, 1.0, {}, 1), StepSizeError);
}

TEST_CASE("hyperboundedness probe under a negative quadratic potential") {
  const LsiParams params{0.5, 1.0, 2.0};
  const WeightedGridMeasure m = gamma_measure(1601);
  const double a = 0.4;  // 1/nu - eps with eps = 0.1
  std::vector<double> V(m.size());
  for (int i = 0; i < m.size(); ++i) V[i] = -a * m.grid.nodes[i] * m.grid.nodes[i];

  SUBCASE("minimum-time boundedness from 2 to 4") {
    const double t = tau(params, 4.0);
    const HyperboundednessProbe probe =
        hyperboundedness_probe(m, V, params, 2.0, 4.0, t);
    CHECK(probe.ok);
    CHECK(probe.empirical_ratio > 0.0);
  }
  SUBCASE("contraction with growth at q = p") {
    for (double t : {0.1, 0.5}) {
      const HyperboundednessProbe probe =
          hyperboundedness_probe(m, V, params, 3.0, 3.0, t);
      CHECK(probe.ok);
    }
  }
  SUBCASE("index-range violations are rejected") {
    CHECK_THROWS_AS(hyperboundedness_probe(m, V, params, 1.05, 4.0, 1.0),
                    DomainError);
    CHECK_THROWS_AS(hyperboundedness_probe(m, V, params, 2.0, 7.0, 1.0),
                    DomainError);
    CHECK_THROWS_AS(hyperboundedness_probe(m, V, params, 2.0, 4.0, 0.01),
                    DomainError);
  }
}

TEST_CASE("quadratic-exponent flow") {
  SUBCASE("critical coefficient: monotone approach to the double root") {
    const GaussianFlow flow = gaussian_flow(1.0, 0.3, 40.0);
    for (std::size_t i = 1; i < flow.s.size(); ++i)
      CHECK(flow.s[i] >= flow.s[i - 1] - 1e-14);
    CHECK(flow.s.back() > 0.49);
    CHECK(flow.s.back() < 0.5);
  }
  SUBCASE("zero coefficient: logistic decay toward zero") {
    const GaussianFlow flow = gaussian_flow(0.0, 0.25, 3.0);
    // s(t) = s0 / (s0 + (1 - s0) e^{4t})
    double worst = 0.0;
    for (std::size_t i = 0; i < flow.times.size(); ++i) {
      const double t = flow.times[i];
      const double ref = 0.25 / (0.25 + 0.75 * std::exp(4.0 * t));
      worst = std::max(worst, std::abs(flow.s[i] - ref));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("trajectory satisfies the quadratic flow equation") {
    const GaussianFlow flow = gaussian_flow(0.45, 0.1, 2.0);
    CHECK(flow.max_ode_residual < 1e-8);
  }
  SUBCASE("closed-form implicit solution") {
    const double a = 0.45, s0 = 0.05;
    const GaussianFlow flow = gaussian_flow(a, s0, 2.0);
    const double disc = std::sqrt(1.0 - a);
    const double lo = 0.5 * (1.0 - disc), hi = 0.5 * (1.0 + disc);
    auto T = [&](double s) {
      return 1.0 / (4.0 * (hi - lo)) *
             (std::log((hi - s) / (lo - s < 0 ? s - lo : lo - s)) -
              std::log((hi - s0) / (lo - s0 < 0 ? s0 - lo : lo - s0)));
    };
    // compare at interior sample points below the lower root
    for (std::size_t i = 10; i < flow.s.size(); i += 2000) {
      if (flow.s[i] >= lo) break;
      CHECK(T(flow.s[i]) == doctest::Approx(flow.times[i]).epsilon(1e-8));
    }
  }
  SUBCASE("flow-field consistency with the propagated family") {
    // f(t,x) = e^{b + s x^2} solves df/dt = -(grad*grad - a x^2) f on gamma
    const double a = 0.45;
    const GaussianFlow flow = gaussian_flow(a, 0.05, 1.0);
    const Grid g = Grid::uniform(-4.0, 4.0, 4001);
    const WeightedGridMeasure m = build_measure(g, gaussian_density(1.0), true);
    std::vector<double> V(g.n);
    for (int i = 0; i < g.n; ++i) V[i] = -a * g.nodes[i] * g.nodes[i];
    const TridiagonalOperator H = schrodinger_operator(m, V);

    const double t = 0.5, dt = 1e-5;
    auto family = [&](double tt) {
      std::vector<double> f(g.n);
      const double s = flow.s_at(tt), b = flow.b_at(tt);
      for (int i = 0; i < g.n; ++i)
        f[i] = std::exp(b + s * g.nodes[i] * g.nodes[i]);
      return f;
    };
    const std::vector<double> f = family(t);
    const std::vector<double> fp = family(t + dt), fm = family(t - dt);
    const std::vector<double> Hf = H.apply(f);
    double num = 0.0, den = 0.0;
    for (int i = 1; i + 1 < g.n; ++i) {
      const double resid = (fp[i] - fm[i]) / (2.0 * dt) + Hf[i];
      num += resid * resid * m.weights[i];
      den += f[i] * f[i] * m.weights[i];
    }
    CHECK(std::sqrt(num / den) < 1e-4);
  }
}

TEST_CASE("blow-up experiment preconditions") {
  CHECK_THROWS_AS(blowup_experiment(2.0, 5.0), DomainError);  // p1 < p0
}

TEST_CASE("log-moment curve for a linear weight") {
  const WeightedGridMeasure m = gamma_measure();
  std::vector<double> g(m.size());
  for (int i = 0; i < m.size(); ++i) g[i] = m.grid.nodes[i];
  std::vector<double> ts;
  for (double t = -0.5; t <= 1.2; t += 0.05)
    if (std::abs(t) >= 1e-3) ts.push_back(t);
  const HerbstCurve curve = herbst_curve(m, g, ts);
  // ratio is the constant Var(g)/2 = 1/4 for the variance-1/2 Gaussian
  for (double r : curve.r) CHECK(r == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(curve.max_identity_residual < 1e-3);
  CHECK(std::abs(curve.limit_at_zero - curve.mean_g) < 1e-4);
  CHECK(std::abs(curve.mean_g) < 1e-10);

  SUBCASE("constant weight has zero entropy ratio") {
    std::vector<double> c(m.size(), 0.7);
    const HerbstCurve flat = herbst_curve(m, c, ts);
    for (double r : flat.r) CHECK(std::abs(r) < 1e-12);
    for (double u : flat.u) CHECK(u == doctest::Approx(0.7).epsilon(1e-12));
  }
  SUBCASE("grid touching zero is rejected") {
    std::vector<double> bad{-0.5, 0.0, 0.5};
    CHECK_THROWS_AS(herbst_curve(m, g, bad), DomainError);
  }
}
