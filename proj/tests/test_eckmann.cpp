#include <cmath>

#include "doctest.h"
#include "hypercon/eckmann.hpp"

using namespace hypercon;

namespace {

EckmannInput power_input(double lambda, double r, double x0) {
  EckmannInput in;
  in.V = power_potential(lambda, r);
  in.dV = [lambda, r](double x) {
    return 2.0 * lambda * r * std::pow(std::abs(x), 2.0 * r - 1.0);
  };
  in.x0 = x0;
  return in;
}

}  // namespace

TEST_CASE("slope and log-derivative conditions") {
  SUBCASE("power growth") {
    const EckmannConditions c = check_eckmann_conditions(power_input(1.0, 2.0, 1.0), 12.0);
    CHECK(c.a == doctest::Approx(2.0).epsilon(1e-9));  // sqrt(lambda) r x0^{r-1}
    CHECK(c.k == doctest::Approx(4.0).epsilon(1e-9));  // 2r at x = x0
    CHECK(c.ok);
  }
  SUBCASE("exponential growth") {
    const double cc = 1.0;
    EckmannInput in;
    in.V = exp_growth_potential(cc);
    in.dV = exp_growth_potential_derivative(cc);
    in.x0 = 1.25;
    const EckmannConditions c = check_eckmann_conditions(in, 6.0);
    CHECK(c.a == doctest::Approx(cc * std::exp(cc * 1.25)).epsilon(1e-6));
    CHECK(c.k == doctest::Approx(2.0 * cc).epsilon(1e-9));
    CHECK(c.ok);
  }
  SUBCASE("very rapid growth is routed to the second-order builder") {
    EckmannInput in;
    in.V = super_potential(0.5);
    in.dV = [](double x) { return 2.0 * x * std::exp(x * x); };
    in.x0 = 1.0;
    const EckmannConditions c = check_eckmann_conditions(in, 3.5);
    CHECK_FALSE(c.ok);
    CHECK(c.k_unbounded);
  }
  SUBCASE("negative tails fail with a witness") {
    EckmannInput in;
    in.V = [](double x) { return 2.0 - x * x; };
    in.dV = [](double x) { return -2.0 * x; };
    in.x0 = 1.0;
    CHECK_THROWS_AS(check_eckmann_conditions(in, 4.0), ConditionFailed);
  }
}

TEST_CASE("first-order intermediate state") {
  const EckmannInput in = power_input(1.0, 2.0, 1.0);
  const IntermediateState st = build_intermediate(in);
  CHECK(st.b == doctest::Approx(1.0));  // sqrt(V(1)) / 1
  CHECK(st.f_jump < 1e-12);
  CHECK(st.fp_jump < 1e-12);

  SUBCASE("tail accumulates the cube") {
    // F(x) - F(2) = (x^3 - 8)/3 on the tail
    CHECK(st.F(3.0) - st.F(2.0) == doctest::Approx(19.0 / 3.0).epsilon(1e-8));
    CHECK(st.F(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("residual potential on the branches") {
    CHECK(st.V_minus_W(2.5) == doctest::Approx(5.0).epsilon(1e-12));  // 2x
    CHECK(st.V_minus_W(-2.5) == doctest::Approx(5.0).epsilon(1e-12));
    const double x = 0.5;
    CHECK(st.V_minus_W(x) ==
          doctest::Approx(1.0 - x * x + x * x * x * x).epsilon(1e-12));
    CHECK(st.W(2.5) == doctest::Approx(2.5 * 2.5 * 2.5 * 2.5 - 5.0).epsilon(1e-12));
  }
  SUBCASE("tail dominates its quadratic lower bound") {
    const double sv0 = 1.0, a = 2.0;
    for (double x : {1.5, 2.0, 3.0, 5.0}) {
      const double F0 = st.F(x) - 0.5 * st.b;
      CHECK(F0 >= sv0 * (x - 1.0) + 0.5 * a * (x - 1.0) * (x - 1.0) - 1e-9);
    }
  }
  SUBCASE("quadratic potential degenerates to a constant shift") {
    const double omega = 1.3;
    EckmannInput q;
    q.V = [omega](double x) { return omega * omega * x * x; };
    q.dV = [omega](double x) { return 2.0 * omega * omega * x; };
    q.x0 = 1e-3;
    const IntermediateState qs = build_intermediate(q);
    for (double x : {0.5, 1.0, 2.0, 4.0})
      CHECK(qs.V_minus_W(x) == doctest::Approx(omega).epsilon(1e-6));
  }
}

TEST_CASE("matching-point scan keeps a slope margin") {
  const EckmannInput in = power_input(1.0, 2.0, 1.0);
  const double x0 = scan_x0(in, 12.0);
  // monotone slope admits the smallest candidate
  CHECK(x0 == doctest::Approx(0.25));

  SUBCASE("slope and core stiffness grow with the matching point") {
    double last_a = 0.0, last_b = 0.0;
    for (double x0c : {1.0, 1.5, 2.0}) {
      EckmannInput trial = power_input(1.0, 2.0, x0c);
      const EckmannConditions c = check_eckmann_conditions(trial, 12.0);
      const IntermediateState st = build_intermediate(trial);
      CHECK(c.a > last_a);
      CHECK(st.b > last_b);
      last_a = c.a;
      last_b = st.b;
    }
  }
}

TEST_CASE("second-order intermediate state") {
  SUBCASE("very rapid growth") {
    const double alpha = 0.5;
    EckmannInput in;
    in.V = super_potential(alpha);
    in.dV = [alpha](double x) {
      return 4.0 * alpha * x * std::exp(2.0 * alpha * x * x);
    };
    in.d2V = [alpha](double x) {
      return (4.0 * alpha + 16.0 * alpha * alpha * x * x) *
             std::exp(2.0 * alpha * x * x);
    };
    in.x0 = 1.0;
    const IntermediateState st = build_second_order(in, 3.5);
    CHECK(st.second_order);
    CHECK(st.f_jump < 1e-12);
    CHECK(st.fp_jump < 1e-12);
    // V - W = g' - g^2 = alpha - alpha^2 x^2 on the tail
    for (double x : {1.5, 2.0, 3.0})
      CHECK(st.V_minus_W(x) ==
            doctest::Approx(alpha - alpha * alpha * x * x).epsilon(1e-9));
    CHECK(st.g2_ratio < 0.05);
    CHECK(st.gp_ratio < 0.05);
  }
  SUBCASE("power tails have vanishing second-order corrections") {
    EckmannInput in = power_input(1.0, 2.0, 1.0);
    in.d2V = [](double x) { return 12.0 * x * x; };
    const IntermediateState st = build_second_order(in, 12.0);
    // g = 1/x: V - W = g' - g^2 = -2/x^2
    for (double x : {2.0, 4.0})
      CHECK(st.V_minus_W(x) == doctest::Approx(-2.0 / (x * x)).epsilon(1e-9));
  }
}

TEST_CASE("tail divergence is detected for inadmissible exponents") {
  IntermediateState st;
  st.x0 = 1.0;
  st.a = st.b = st.k = 1.0;
  st.c_F = 0.5;
  st.second_order = true;  // bypass the first-order kappa gate
  st.F = [](double x) { return 0.5 * x * x; };
  st.W = [](double x) { return x * x - 1.0; };
  st.V_minus_W = [](double x) { return 3.0 * x * x; };
  CHECK_THROWS_AS(
      perturbation_step(st, [](double x) { return x * x; }, 0.5, 2.0, 6.0, 1201,
                        "synthetic"),
      TailDivergence);
}

TEST_CASE("first-order kappa gate") {
  IntermediateState st;
  st.x0 = 1.0;
  st.a = st.b = 1.0;
  st.k = 4.0;
  st.c_F = 0.5;
  st.F = [](double x) { return 0.5 * x * x; };
  st.W = [](double x) { return x * x - 1.0; };
  st.V_minus_W = [](double) { return 0.0; };
  CHECK_THROWS_AS(perturbation_step(st, [](double x) { return x * x; }, 0.6, 2.0,
                                    6.0, 1201, "gate"),
                  DomainError);
}
