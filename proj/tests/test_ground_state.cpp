#include <cmath>
#include <random>

#include "doctest.h"
#include "hypercon/instances.hpp"
#include "hypercon/potentials.hpp"

using namespace hypercon;

namespace {

Instance flat_instance() {
  const Grid g = Grid::uniform(-8.0, 8.0, 1201);
  WeightedGridMeasure m = build_measure(g, gaussian_density(1.0), true);
  return make_instance("flat", {0.5, 1.0, 2.0}, std::move(m),
                       std::vector<double>(g.n, 0.0));
}

}  // namespace

TEST_CASE("transform with zero potential returns the base measure") {
  const Instance inst = flat_instance();
  CHECK(std::abs(inst.lambda0()) < 1e-8);
  CHECK(inst.gsm.psi_measure.total_mass == doctest::Approx(1.0).epsilon(1e-10));
  for (int i = 0; i < inst.m.size(); ++i) {
    if (std::abs(inst.m.grid.nodes[i]) > 6.0) continue;
    CHECK(inst.gsm.psi_measure.weights[i] ==
          doctest::Approx(inst.m.weights[i]).epsilon(1e-5));
  }
  CHECK(inst.M == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gaussian quadratic instance: ground state measure is the tighter gaussian") {
  const Instance inst = make_gaussian_quadratic(1.0, 3.0, 8.0, 2001);
  // m_psi = m_alpha with alpha = 2
  const ScalarFn ref = gaussian_density(2.0);
  for (int i = 0; i < inst.m.size(); ++i) {
    const double x = inst.m.grid.nodes[i];
    if (std::abs(x) > 5.0) continue;
    CHECK(inst.gsm.psi_measure.density[i] ==
          doctest::Approx(ref(x)).epsilon(2e-4));
  }
  CHECK(inst.gsm.state.gap == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("intertwining and product-rule identities are discrete-exact") {
  const Instance inst = make_gaussian_quadratic(1.0, 3.0, 8.0, 1601);
  CHECK(intertwining_residual(inst) < 1e-9);

  SUBCASE("kinetic split identity") {
    // int |grad(u psi)|^2 dm = int |grad u|^2 dm_psi + int u^2 (l0 - V) dm_psi
    const TridiagonalOperator H0 = dirichlet_operator(inst.m);
    for (const auto& u : default_test_functions(inst.m.grid, 5)) {
      std::vector<double> upsi(u.size()), u2(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) {
        upsi[i] = u[i] * inst.gsm.state.psi[i];
        u2[i] = u[i] * u[i];
      }
      std::vector<double> l0_minus_V(inst.V.size());
      for (std::size_t i = 0; i < inst.V.size(); ++i)
        l0_minus_V[i] = (inst.lambda0() - inst.V[i]) * u2[i];
      const double lhs = dirichlet_energy(inst.m, upsi, upsi);
      const double rhs = dirichlet_energy(inst.gsm.psi_measure, u, u) +
                         integrate(inst.gsm.psi_measure, l0_minus_V);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
  }
}

TEST_CASE("summation by parts is exact for the assembled operator") {
  const Instance inst = make_gaussian_quadratic(1.0, 3.0, 6.0, 801);
  const TridiagonalOperator A = dirichlet_operator(inst.m);
  std::mt19937 rng(17);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> f(inst.m.size()), h(inst.m.size());
    for (int i = 0; i < inst.m.size(); ++i) {
      f[i] = gauss(rng);
      h[i] = gauss(rng);
    }
    const std::vector<double> Af = A.apply(f);
    double pairing = 0.0, scale = 0.0;
    for (int i = 0; i < inst.m.size(); ++i) {
      pairing += Af[i] * h[i] * inst.m.weights[i];
      scale += std::abs(Af[i] * h[i]) * inst.m.weights[i];
    }
    CHECK(std::abs(pairing - dirichlet_energy(inst.m, f, h)) <=
          1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("eikonal residual is small in the weighted norm") {
  const Instance inst = make_gaussian_quadratic();
  const WkbResidual r = wkb_residual(inst.gsm, inst.V);
  const double h = inst.m.grid.h;
  CHECK(r.l2_m < std::max(1e-4, 10.0 * h * h));
  // F is quadratic: x^2/2 up to an additive constant
  const double mid_F = inst.gsm.F[inst.m.size() / 2];
  for (int i = 0; i < inst.m.size(); ++i) {
    const double x = inst.m.grid.nodes[i];
    if (std::abs(x) > 3.0) continue;
    CHECK(inst.gsm.F[i] - mid_F == doctest::Approx(0.5 * x * x).epsilon(2e-4));
  }
}

TEST_CASE("flat instance has vanishing eikonal data") {
  const Instance inst = flat_instance();
  const WkbResidual r = wkb_residual(inst.gsm, inst.V);
  CHECK(r.l2_m < 1e-6);
}

TEST_CASE("level-weighted identities") {
  const Instance inst = make_gaussian_quadratic();

  SUBCASE("constant weight") {
    const double res = aida_identity_residual(
        inst.gsm, inst.V, [](double) { return 1.0; }, [](double) { return 0.0; });
    CHECK(res < 1e-4);
  }
  SUBCASE("exponential weight") {
    const double a = 0.5;
    const double res = aida_identity_residual(
        inst.gsm, inst.V, [a](double s) { return std::exp(a * s) / (1.0 + a); },
        [a](double s) { return a * std::exp(a * s) / (1.0 + a); });
    CHECK(res < 1e-4);
  }
  SUBCASE("one-sided level-set inequality at five levels") {
    for (double level : {-0.2, 0.0, 0.5, 1.0, 2.0})
      CHECK(aida_halfline_check(inst, level).ok);
  }
}

TEST_CASE("entropy split identity") {
  const Instance inst = make_gaussian_quadratic(1.0, 3.0, 8.0, 1601);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> unif(0.2, 1.5);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> u(inst.m.size());
    for (int i = 0; i < inst.m.size(); ++i)
      u[i] = unif(rng) + std::sin(0.3 * trial * inst.m.grid.nodes[i]);
    CHECK(std::abs(entropy_split_residual(inst.gsm, u)) < 1e-8);
  }
}

TEST_CASE("lambda0 certificate") {
  SUBCASE("zero potential: all bounds coincide at zero") {
    const Lambda0Certificate c = lambda0_certificate(flat_instance());
    CHECK(std::abs(c.federbush_lower) < 1e-9);
    CHECK(std::abs(c.aida_upper) < 1e-9);
    CHECK(std::abs(c.mean_upper) < 1e-9);
    CHECK(c.sandwich_ok);
    CHECK(c.product_ok);
  }
  SUBCASE("gaussian quadratic: strict sandwich") {
    const Lambda0Certificate c = lambda0_certificate(make_gaussian_quadratic());
    CHECK(c.sandwich_ok);
    CHECK(c.product_ok);
    CHECK(c.federbush_lower < c.lambda0);
    CHECK(c.lambda0 < c.aida_upper);
    CHECK(c.lambda0 < c.mean_upper);
    CHECK(c.product_residual < 1e-9);
    // closed forms: lambda0 = 1, mean = 3 <x^2> = 3/2
    CHECK(c.mean_upper == doctest::Approx(1.5).epsilon(1e-9));
  }
}

TEST_CASE("moment product checks") {
  SUBCASE("flat instance sits exactly at M = 1") {
    const CheckRecord rec = moment_product_check(flat_instance(), 0.3, 0.5);
    CHECK(rec.ok);
    CHECK(rec.lhs == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rec.rhs == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("gaussian quadratic instance") {
    const Instance inst = make_gaussian_quadratic();
    const MomentRoots mr = moment_roots(inst.params);
    for (double fr : {0.25, 0.5, 0.75})
      for (double fs : {0.25, 0.5, 0.75}) {
        const CheckRecord rec =
            moment_product_check(inst, fr * mr.r0, fs * mr.s0);
        CHECK(rec.ok);
        CHECK(rec.slack > 0.0);
      }
    CHECK_THROWS_AS(moment_product_check(inst, mr.r0 * 1.01, 0.5), DomainError);
  }
  SUBCASE("local variant across truncation levels") {
    const Instance inst = make_gaussian_quadratic();
    const MomentRoots mr = moment_roots(inst.params);
    for (double delta : {0.1, 0.5, 1.0})
      CHECK(local_moment_product_check(inst, 0.5 * mr.r0, 0.5 * mr.s0, delta).ok);
  }
}

TEST_CASE("inverse-moment bounds and their ordering") {
  const Instance inst = make_gaussian_quadratic();
  const MomentRoots mr = moment_roots(inst.params);
  const double s = 0.5 * mr.s0;
  const auto records = psi_inverse_bound_check(inst, s);
  REQUIRE(records.size() == 3);
  for (const auto& r : records) CHECK(r.ok);
  // sigma_star bound no looser than the split-M bound
  const double sig_star = sigma_star(inst.params, s);
  const double cnu = sobolev_coefficient(inst.params);
  const double a = (2.0 / s + 1.0) * cnu;
  const double sigma = 2.0 * cnu * mr.b_kappa;
  CHECK(sig_star <= ell(inst.params, a) + ell(inst.params, sigma) + sigma + 1e-12);
}

TEST_CASE("distribution statistics") {
  SUBCASE("flat instance carries no extreme-set mass") {
    const Instance inst = flat_instance();
    const DistributionStats st = distribution_stats(inst.gsm, 0.5, 2.0);
    CHECK(st.A_eps < 1e-12);
    CHECK(st.C_K < 1e-12);
  }
  SUBCASE("monotone in the thresholds") {
    const Instance inst = make_gaussian_quadratic();
    const DistributionStats a = distribution_stats(inst.gsm, 0.2, 1.05);
    const DistributionStats b = distribution_stats(inst.gsm, 0.1, 2.1);
    CHECK(b.A_eps <= a.A_eps + 1e-15);
    CHECK(b.C_K <= a.C_K + 1e-15);
  }
  SUBCASE("upper bounds hold with slack") {
    const Instance inst = make_gaussian_quadratic();
    for (const auto& rec : distribution_bound_checks(inst, 0.1, 2.0)) {
      CHECK(rec.ok);
      CHECK(rec.slack >= 0.0);
    }
  }
}

TEST_CASE("defective-LSI checks over the test battery") {
  const Instance inst = make_gaussian_quadratic();
  const double a =
      2.0 * sobolev_coefficient(inst.params) * b_kappa(inst.params);
  const auto records =
      dlsi_check(inst, a, a, default_test_functions(inst.m.grid));
  REQUIRE(records.size() == 2);
  for (const auto& rec : records) CHECK(rec.ok);
  CHECK_THROWS_AS(dlsi_check(inst, 0.01, a, default_test_functions(inst.m.grid)),
                  DomainError);
}

TEST_CASE("consecutive transforms") {
  const Grid g = Grid::uniform(-8.0, 8.0, 2001);
  const WeightedGridMeasure m = build_measure(g, gaussian_density(1.0), true);

  SUBCASE("trivial second factor") {
    std::vector<double> V1(g.n), zero(g.n, 0.0);
    for (int i = 0; i < g.n; ++i) V1[i] = g.nodes[i] * g.nodes[i];
    const ConsecutiveTransformResult res = consecutive_transform_check(m, V1, zero);
    CHECK(res.sup_psi_diff < 1e-6);
    CHECK(res.lambda_residual < 1e-8);
  }
  SUBCASE("additive quadratic shifts") {
    std::vector<double> V1(g.n), V2(g.n);
    for (int i = 0; i < g.n; ++i) {
      V1[i] = 1.0 * g.nodes[i] * g.nodes[i];
      V2[i] = 2.0 * g.nodes[i] * g.nodes[i];
    }
    const ConsecutiveTransformResult res = consecutive_transform_check(m, V1, V2);
    CHECK(res.sup_psi_diff < 1e-3);
    CHECK(res.lambda_residual < 1e-4);
    CHECK(res.lambda == doctest::Approx(1.0).epsilon(1e-5));  // sqrt(1+3) - 1
  }
}

TEST_CASE("spectral-gap certificate from the distribution of psi") {
  SUBCASE("flat instance certifies at the first ladder step") {
    const Instance inst = flat_instance();
    const AidaGapEstimate est = aida_gap_estimate(inst.gsm, 0.5, 1.0, 0.0);
    CHECK(est.feasible);
    CHECK(est.K == doctest::Approx(2.0));
    CHECK(est.eps == doctest::Approx(0.5));
    CHECK(est.gamma1 > 0.0);
    CHECK(std::isfinite(est.gamma1));
  }
  SUBCASE("gaussian quadratic: certificate bounds the measured gap") {
    const Instance inst = make_gaussian_quadratic();
    const double cnu = sobolev_coefficient(inst.params);
    const double a = 3.0 * cnu;
    const double defect =
        2.0 * (log_lp_norm_exp(inst.m, inst.gsm.F, 1.0) +
               a * inst.log_norm_elv_nu);
    const AidaGapEstimate est =
        aida_gap_estimate(inst.gsm, inst.params.c, 2.0 * a, std::max(defect, 0.0));
    CHECK(est.feasible);
    const GroundState mp = ground_state(dirichlet_operator(inst.gsm.psi_measure));
    CHECK(mp.gap >= 1.0 / est.gamma1);
  }
  SUBCASE("gamma1 grows with the defect") {
    const Instance inst = make_gaussian_quadratic();
    double last = 0.0;
    for (double D : {1.0, 2.0, 3.0}) {
      const AidaGapEstimate est = aida_gap_estimate(inst.gsm, 0.5, 1.0, D);
      CHECK(est.gamma1 >= last);
      last = est.gamma1;
    }
  }
}

TEST_CASE("bounded tilt instance solves its analytic profile") {
  const Instance inst = make_bounded_tilt();
  const TiltProfile prof = bounded_tilt_profile(inst.m.grid);
  // normalize e^{-F} in L^2(m) and compare with the solved ground state;
  // relative sup away from the half-unit Dirichlet boundary layer (psi grows
  // polynomially there, so the truncation shows at the outermost nodes)
  std::vector<double> ref(inst.m.size());
  double norm = 0.0;
  for (int i = 0; i < inst.m.size(); ++i) {
    ref[i] = std::exp(-prof.F[i]);
    norm += ref[i] * ref[i] * inst.m.weights[i];
  }
  norm = std::sqrt(norm);
  double worst = 0.0, l2 = 0.0;
  for (int i = 0; i < inst.m.size(); ++i) {
    const double diff = inst.gsm.state.psi[i] - ref[i] / norm;
    l2 += diff * diff * inst.m.weights[i];
    if (std::abs(inst.m.grid.nodes[i]) > 7.5) continue;
    worst = std::max(worst, std::abs(diff) / (1.0 + ref[i] / norm));
  }
  CHECK(worst < 1e-3);
  CHECK(std::sqrt(l2) < 1e-4);
  CHECK(std::abs(inst.lambda0()) < 1e-4);
  // psi and 1/psi both unbounded relative to the bulk scale
  CHECK(lp_norm(inst.m, inst.gsm.state.psi, std::numeric_limits<double>::infinity()) >
        10.0);
}

TEST_CASE("bounded-oscillation polynomial bounds") {
  const Instance inst = make_bounded_tilt();
  const TiltProfile prof = bounded_tilt_profile(inst.m.grid);
  const BoundedPotentialBounds bounds =
      bounded_potential_bounds(inst.params.c, prof.osc_v);
  for (double p : {2.0, 3.0, 4.0, 6.0}) {
    const double norm =
        std::exp(log_lp_norm_exp(inst.m, [&] {
                   std::vector<double> neg(inst.gsm.F.size());
                   for (std::size_t i = 0; i < neg.size(); ++i)
                     neg[i] = -inst.gsm.F[i];
                   return neg;
                 }(), p));
    CHECK(norm <= bounds.psi_p_bound(p) * (1.0 + 1e-6));
  }
  for (double r : {0.5, 1.0}) {
    std::vector<double> neg(inst.gsm.F.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -inst.gsm.F[i];
    const double norm = std::exp(log_lp_norm_exp(inst.m, neg, r));
    CHECK(norm >= bounds.psi_r_lower(r) * (1.0 - 1e-6));
  }
  for (double s : {1.0, 2.0, 4.0}) {
    const double norm = std::exp(log_lp_norm_exp(inst.m, inst.gsm.F, s));
    CHECK(norm <= bounds.psi_inv_bound(s) * (1.0 + 1e-6));
  }
}
