#include "hypercon/eckmann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "hypercon/instances.hpp"

namespace hypercon {

namespace {

// Cumulative tail integral table for F0(x) = int_{x0}^{x} f, with per-cell
// Simpson and a Richardson consistency check.  The table stops once F0 is
// deep past any representable density; beyond it a linear lower-bound
// extrapolation is used (the density is identically zero there anyway).
class TailIntegral {
 public:
  TailIntegral(ScalarFn f, double x0, double cap_value = 2000.0, double x_cap = 48.0,
               double cell = 1.0 / 1024.0)
      : f_(std::move(f)), x0_(x0) {
    xs_.push_back(x0);
    vals_.push_back(0.0);
    double x = x0, acc = 0.0;
    while (x < x_cap && acc < cap_value) {
      const double h = cell;
      const double fl = f_(x), fm = f_(x + 0.5 * h), fr = f_(x + h);
      const double coarse = 0.5 * h * (fl + fr);
      const double fine = h / 6.0 * (fl + 4.0 * fm + fr);
      if (!(std::isfinite(fine)))
        break;  // integrand overflowed; the table is already deep enough
      if (std::abs(coarse - fine) > 1e-6 * (1.0 + std::abs(fine)) * 64.0) {
        // refine once; if still inconsistent the integrand is too rough
        const double fml = f_(x + 0.25 * h), fmr = f_(x + 0.75 * h);
        const double finer = h / 12.0 * (fl + 4.0 * fml + 2.0 * fm + 4.0 * fmr + fr);
        if (std::abs(finer - fine) > 1e-4 * (1.0 + std::abs(finer)))
          throw QuadratureError("tail integral failed the refinement check");
      }
      acc += fine;
      x += h;
      xs_.push_back(x);
      vals_.push_back(acc);
    }
    slope_ = f_(x);
    if (!std::isfinite(slope_)) slope_ = 0.0;
  }

  double operator()(double x) const {
    if (x <= x0_) return 0.0;
    if (x >= xs_.back())
      return vals_.back() + slope_ * (x - xs_.back());
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t hi = it - xs_.begin();
    const std::size_t lo = hi - 1;
    const double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
    return (1.0 - t) * vals_[lo] + t * vals_[hi];
  }

 private:
  ScalarFn f_;
  double x0_;
  double slope_ = 0.0;
  std::vector<double> xs_, vals_;
};

struct LogWidening {
  double log_inner = 0.0, log_outer = 0.0;
};

// log int_{-L}^{L} e^{g(x)} dx on a fine grid, for the analytic widening tests.
double log_exp_integral(const std::function<double(double)>& g, double L, int n) {
  const double h = 2.0 * L / n;
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> vals(n + 1);
  for (int i = 0; i <= n; ++i) {
    vals[i] = g(-L + i * h);
    peak = std::max(peak, vals[i]);
  }
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * std::exp(vals[i] - peak);
  }
  return peak + std::log(acc * h);
}

CheckRecord widening_record(const std::string& check, const std::string& instance,
                            const std::function<double(double)>& g, double L, int n,
                            bool expect_finite) {
  const double inner = log_exp_integral(g, L, n);
  const double outer = log_exp_integral(g, 2.0 * L, 2 * n);
  CheckRecord rec;
  rec.check = check;
  rec.instance = instance;
  rec.lhs = outer - inner;                  // log growth under doubling
  rec.rhs = expect_finite ? 1e-3 : std::log(10.0);
  rec.slack = rec.rhs - rec.lhs;
  rec.ok = expect_finite ? rec.lhs < rec.rhs : rec.lhs > rec.rhs;
  rec.details = {{"log_inner", inner}, {"log_outer", outer}, {"L", L}};
  return rec;
}

// Shared battery + gap comparison for a solved relative instance.
void run_bound_battery(const Instance& inst, std::vector<CheckRecord>& battery,
                       double& final_gap, double& log_c1, double& log_gamma1,
                       bool& gap_ok) {
  const MomentRoots mr = moment_roots(inst.params);
  for (double fr : {0.33, 0.66})
    for (double fs : {0.33, 0.66})
      battery.push_back(moment_product_check(inst, fr * mr.r0, fs * mr.s0));
  for (double delta : {0.1, 0.5, 1.0})
    battery.push_back(
        local_moment_product_check(inst, 0.5 * mr.r0, 0.5 * mr.s0, delta));
  for (auto& rec : distribution_bound_checks(inst, 0.1, 2.0))
    battery.push_back(rec);
  const double cnu = sobolev_coefficient(inst.params);
  const double a_dlsi = 2.0 * cnu * b_kappa(inst.params);
  for (auto& rec : dlsi_check(inst, a_dlsi, a_dlsi,
                              default_test_functions(inst.m.grid)))
    battery.push_back(rec);

  // Aida gap certificate with the measured defect at a = 3 c_nu (s = 1).
  const double a_meas = 3.0 * cnu;
  std::vector<double> F = inst.gsm.F;
  const double defect =
      2.0 * (log_lp_norm_exp(inst.m, F, 1.0) + a_meas * inst.log_norm_elv_nu);
  const AidaGapEstimate est =
      aida_gap_estimate(inst.gsm, inst.params.c, 2.0 * a_meas, std::max(defect, 0.0));
  CheckRecord gap_rec;
  gap_rec.check = "aida_gap_certificate";
  gap_rec.instance = inst.name;

  const GroundState mpsi_gap = ground_state(dirichlet_operator(inst.gsm.psi_measure));
  final_gap = mpsi_gap.gap;
  gap_rec.lhs = 1.0 / est.gamma1;
  gap_rec.rhs = final_gap;
  gap_rec.slack = gap_rec.rhs - gap_rec.lhs;
  gap_rec.ok = est.feasible && gap_rec.lhs <= gap_rec.rhs * (1.0 + 1e-6);
  gap_rec.details = {{"gamma1", est.gamma1},
                     {"eps", est.eps},
                     {"K", est.K},
                     {"feasible", est.feasible},
                     {"diagnostics", est.diagnostics}};
  battery.push_back(gap_rec);

  const MainTheoremConstants mt = main_theorem_constants(inst.params, inst.M);
  log_c1 = mt.log_c1_bound;
  log_gamma1 = mt.gap.log_gamma1_bound;
  gap_ok = final_gap > 0.0 && std::log(final_gap) >= -mt.log_c1_bound &&
           std::log(final_gap) >= -mt.gap.log_gamma1_bound;
}

}  // namespace

EckmannConditions check_eckmann_conditions(const EckmannInput& in, double probe_max,
                                           int probe_points) {
  if (!(probe_max > in.x0))
    throw DomainError("check_eckmann_conditions: probe_max must exceed x0");
  EckmannConditions cond;
  cond.a = std::numeric_limits<double>::infinity();
  double k_mid = 0.0;
  const double h = (probe_max - in.x0) / (probe_points - 1);
  double worst_x = in.x0;
  for (int side = 0; side < (in.sign_split ? 2 : 1); ++side) {
    const double sgn = side == 0 ? 1.0 : -1.0;
    for (int i = 0; i < probe_points; ++i) {
      const double x = sgn * (in.x0 + i * h);
      const double v = in.V(x);
      if (!(v > 0.0))
        throw ConditionFailed("potential not positive on the tail", x);
      const double slope = sgn * in.dV(x) / (2.0 * std::sqrt(v));
      if (slope < cond.a) {
        cond.a = slope;
        worst_x = x;
      }
      const double logd = sgn * in.dV(x) / v;
      cond.k = std::max(cond.k, logd);
      if (std::abs(x) <= in.x0 + 0.5 * (probe_max - in.x0))
        k_mid = std::max(k_mid, logd);
    }
  }
  if (!(cond.a > 0.0))
    throw ConditionFailed("slope of sqrt(V) not bounded below on the tail", worst_x);
  // A log-derivative still climbing at the probe edge signals unbounded k.
  cond.k_unbounded = cond.k > 1.25 * std::max(k_mid, 1e-300);
  cond.ok = !cond.k_unbounded;
  return cond;
}

double scan_x0(const EckmannInput& in, double probe_max, double x0_min, double x0_max) {
  for (double x0 = x0_min; x0 <= x0_max; x0 *= std::sqrt(2.0)) {
    const int pts = 256;
    const double h = (probe_max - x0) / (pts - 1);
    double a_min = std::numeric_limits<double>::infinity();
    double at_x0 = 0.0;
    bool valid = true;
    for (int i = 0; i < pts; ++i) {
      const double x = x0 + i * h;
      const double v = in.V(x);
      if (!(v > 0.0)) {
        valid = false;
        break;
      }
      const double slope = in.dV(x) / (2.0 * std::sqrt(v));
      if (i == 0) at_x0 = slope;
      a_min = std::min(a_min, slope);
    }
    // admit x0 once the tail minimum keeps a 10% margin of the seam slope
    if (valid && a_min > 0.0 && a_min >= 0.1 * at_x0) return x0;
  }
  throw ConstructionError("scan_x0: no admissible matching point found");
}

IntermediateState build_intermediate(const EckmannInput& in) {
  IntermediateState st;
  st.x0 = in.x0;
  const double vx0 = in.V(in.x0);
  if (!(vx0 > 0.0)) throw ConditionFailed("V(x0) must be positive", in.x0);
  st.b = std::sqrt(vx0) / in.x0;

  auto sqrtV = [V = in.V](double x) { return std::sqrt(V(x)); };
  auto tail = std::make_shared<TailIntegral>(sqrtV, in.x0);
  const double x0 = in.x0;
  const double b = st.b;
  const double core_shift = 0.5 * b * x0 * x0;

  st.F = [tail, x0, b, core_shift](double x) {
    const double ax = std::abs(x);
    if (ax < x0) return 0.5 * b * x * x;
    return (*tail)(ax) + core_shift;
  };
  st.W = [V = in.V, dV = in.dV, x0, b](double x) {
    const double ax = std::abs(x);
    if (ax < x0) return -b + b * b * x * x;
    return V(x) - dV(ax) / (2.0 * std::sqrt(V(x)));
  };
  st.V_minus_W = [V = in.V, dV = in.dV, x0, b](double x) {
    const double ax = std::abs(x);
    if (ax < x0) return b - b * b * x * x + V(x);
    return dV(ax) / (2.0 * std::sqrt(V(x)));
  };

  // One-sided branch limits at the seam; both vanish by construction of b.
  st.f_jump = std::abs(0.5 * b * x0 * x0 - ((*tail)(x0) + core_shift));
  st.fp_jump = std::abs(b * x0 - std::sqrt(in.V(x0)));
  return st;
}

IntermediateState build_second_order(const EckmannInput& in, double probe_max) {
  if (!in.d2V)
    throw DomainError("build_second_order: V'' required for the second-order route");
  if (probe_max <= in.x0) probe_max = 4.0 * std::max(1.0, in.x0);

  auto g = [dV = in.dV, V = in.V](double x) { return dV(x) / (4.0 * V(x)); };
  auto gp = [dV = in.dV, V = in.V, d2V = in.d2V](double x) {
    const double v = V(x);
    return (d2V(x) * v - dV(x) * dV(x)) / (4.0 * v * v);
  };
  auto sqrtV = [V = in.V](double x) { return std::sqrt(V(x)); };

  IntermediateState st;
  st.x0 = in.x0;
  st.second_order = true;
  st.b = (std::sqrt(in.V(in.x0)) + g(in.x0)) / in.x0;

  // Slope condition for sqrt(V) + g on the probe tail.
  {
    const int pts = 512;
    const double h = (probe_max - in.x0) / (pts - 1);
    double a = std::numeric_limits<double>::infinity();
    double worst = in.x0;
    auto fg = [&](double x) { return sqrtV(x) + g(x); };
    for (int i = 0; i + 1 < pts; ++i) {
      const double x = in.x0 + i * h;
      const double slope = (fg(x + h) - fg(x)) / h;
      if (slope < a) {
        a = slope;
        worst = x;
      }
    }
    if (!(a > 0.0))
      throw ConditionFailed("slope of sqrt(V) + g not positive on the tail", worst);
    st.a = a;
  }

  auto integrand = [sqrtV, g](double x) { return sqrtV(x) + g(x); };
  auto tail = std::make_shared<TailIntegral>(ScalarFn(integrand), in.x0);
  const double x0 = in.x0;
  const double b = st.b;
  const double core_shift = 0.5 * b * x0 * x0;

  // Smallness of the second-order corrections relative to F0 at the probe
  // edge, with monotone decrease over the outer half of the probe range.
  auto F0 = [tail, core_shift](double x) { return (*tail)(x) + core_shift; };
  auto ratio2 = [&](double x) { return g(x) * g(x) / std::max(F0(x), 1e-300); };
  auto ratiop = [&](double x) { return std::abs(gp(x)) / std::max(F0(x), 1e-300); };
  st.g2_ratio = ratio2(probe_max);
  st.gp_ratio = ratiop(probe_max);
  if (!(st.g2_ratio < 0.05))
    throw ConditionFailed("g^2 not small relative to F0 at the probe edge",
                          probe_max);
  if (!(st.gp_ratio < 0.05))
    throw ConditionFailed("|g'| not small relative to F0 at the probe edge",
                          probe_max);
  for (int i = 0; i + 1 < 8; ++i) {
    const double xa = probe_max * (0.5 + 0.5 * i / 7.0);
    const double xb = probe_max * (0.5 + 0.5 * (i + 1) / 7.0);
    if (ratio2(xb) > ratio2(xa) * (1.0 + 1e-9) ||
        ratiop(xb) > ratiop(xa) * (1.0 + 1e-9))
      throw ConditionFailed("second-order ratios not decreasing near the edge", xb);
  }

  st.F = [tail, x0, b, core_shift](double x) {
    const double ax = std::abs(x);
    if (ax < x0) return 0.5 * b * x * x;
    return (*tail)(ax) + core_shift;
  };
  st.W = [V = in.V, g, gp, x0, b](double x) {
    const double ax = std::abs(x);
    if (ax < x0) return -b + b * b * x * x;
    return V(x) + g(ax) * g(ax) - gp(ax);
  };
  st.V_minus_W = [g, gp, x0, b, V = in.V](double x) {
    const double ax = std::abs(x);
    if (ax < x0) return b - b * b * x * x + V(x);
    return gp(ax) - g(ax) * g(ax);
  };

  st.f_jump = std::abs(0.5 * b * x0 * x0 - ((*tail)(x0) + core_shift));
  st.fp_jump = std::abs(b * x0 - (std::sqrt(in.V(x0)) + g(x0)));
  return st;
}

EckmannReport perturbation_step(const IntermediateState& st, const ScalarFn& V,
                                double kappa, double nu, double L, int n,
                                const std::string& name) {
  if (!st.second_order && !(kappa * (st.k / 2.0) * (st.k / 2.0) < 2.0))
    throw DomainError("perturbation_step: kappa (k/2)^2 must be < 2 on the "
                      "first-order route");

  EckmannReport rep;
  rep.name = name;
  rep.x0 = st.x0;
  rep.a = st.a;
  rep.k = st.k;
  rep.b = st.b;
  rep.c_F = st.c_F;
  rep.second_order = st.second_order;
  rep.f_jump = st.f_jump;
  rep.fp_jump = st.fp_jump;
  rep.g2_ratio = st.g2_ratio;
  rep.gp_ratio = st.gp_ratio;

  // Finiteness of int e^{-nu (V-W)} dm^F and int e^{kappa (V-W)} dm^F under
  // domain widening, in log space.
  auto dens_exp = [&](double mult) {
    return [&, mult](double x) { return mult * st.V_minus_W(x) - 2.0 * st.F(x); };
  };
  for (double nup : {nu, 2.0 * nu}) {
    CheckRecord rec = widening_record("relative_nu_finiteness", name,
                                      dens_exp(-nup), L, 4 * n, true);
    rec.details["nu"] = nup;
    if (!rec.ok)
      throw TailDivergence("perturbation_step: e^{-nu(V-W)} diverges under widening");
    rep.finiteness.push_back(std::move(rec));
  }
  for (double kp : {0.5 * kappa, kappa}) {
    CheckRecord rec = widening_record("relative_kappa_finiteness", name,
                                      dens_exp(kp), L, 4 * n, true);
    rec.details["kappa"] = kp;
    if (!rec.ok)
      throw TailDivergence("perturbation_step: e^{kappa(V-W)} diverges under widening");
    rep.finiteness.push_back(std::move(rec));
  }

  // Solve the relative problem on m^F and check that the intermediate state
  // really is the ground state of its own potential.
  const Grid g = Grid::uniform(-L, L, n);
  WeightedGridMeasure mF = build_measure(
      g, [&](double x) { return std::exp(-2.0 * st.F(x)); }, true);
  const LsiParams params{st.c_F, kappa, nu};
  Instance inst = make_instance(name, params, std::move(mF),
                                sample(g, st.V_minus_W));
  rep.lambda0 = inst.lambda0();
  rep.gap = inst.gsm.state.gap;

  {
    WeightedGridMeasure leb = build_measure(g, constant_density(), false);
    const GroundState psiW = ground_state(schrodinger_operator(leb, sample(g, st.W)));
    std::vector<double> ref(g.n);
    double norm = 0.0;
    for (int i = 0; i < g.n; ++i) {
      ref[i] = std::exp(-st.F(g.nodes[i]));
      norm += ref[i] * ref[i] * leb.weights[i];
    }
    norm = std::sqrt(norm);
    for (int i = 0; i < g.n; ++i)
      rep.wkb_closure_sup =
          std::max(rep.wkb_closure_sup, std::abs(psiW.psi[i] - ref[i] / norm));
  }

  run_bound_battery(inst, rep.battery, rep.final_gap, rep.log_c1_bound,
                    rep.log_gamma1_bound, rep.gap_ok);
  rep.ok = rep.gap_ok && rep.wkb_closure_sup < 1e-3;
  for (const auto& rec : rep.battery) rep.ok = rep.ok && rec.ok;
  return rep;
}

namespace {

EckmannReport run_first_order(const std::string& name, const EckmannInput& in,
                              double probe_max, double kappa, double nu, double L,
                              int n) {
  const EckmannConditions cond = check_eckmann_conditions(in, probe_max);
  IntermediateState st = build_intermediate(in);
  st.a = cond.a;
  st.k = cond.k;
  st.c_F = 0.5 / std::min(cond.a, st.b);
  return perturbation_step(st, in.V, kappa, nu, L, n, name);
}

}  // namespace

EckmannReport run_eckmann_example(const std::string& name, double param1,
                                  double param2) {
  if (name == "power") {
    const double r = param1 > 0.0 ? param1 : 2.0;
    const double lambda = param2 > 0.0 ? param2 : 1.0;
    EckmannInput in;
    in.V = power_potential(lambda, r);
    in.dV = [lambda, r](double x) {
      return lambda * 2.0 * r * std::pow(std::abs(x), 2.0 * r - 1.0);
    };
    in.x0 = 1.0;
    const double kappa = std::min(1.0, 0.9 * 2.0 / (r * r));  // kappa (k/2)^2 < 2
    const double L = r >= 2.0 ? 6.0 : 8.0;
    char label[32];
    std::snprintf(label, sizeof label, "power_r%g", r);
    return run_first_order(label, in, 12.0, kappa, 4.0, L, 3001);
  }
  if (name == "polynomial") {
    // x^4 - x^2 + 2: positive with non-monotone core
    EckmannInput in;
    in.V = polynomial_potential({2.0, -1.0, 1.0});
    in.dV = [](double x) { return -2.0 * x + 4.0 * x * x * x; };
    in.x0 = 1.0;
    return run_first_order("polynomial", in, 12.0, 0.4, 4.0, 6.0, 3001);
  }
  if (name == "slow_growth") {
    const double bpar = param1 > 0.0 ? param1 : 1.0;
    EckmannInput in;
    in.V = slow_growth_potential(bpar);
    in.dV = slow_growth_potential_derivative(bpar);
    in.x0 = 1.0;
    return run_first_order("slow_growth", in, 12.0, 0.25, 4.0, 10.0, 3001);
  }
  if (name == "exponential") {
    const double c = param1 > 0.0 ? param1 : 1.0;
    EckmannInput in;
    in.V = exp_growth_potential(c);
    in.dV = exp_growth_potential_derivative(c);
    in.x0 = 1.25;
    const double kappa = std::min(1.0, 0.9 * 2.0 / (c * c));  // k = 2c
    return run_first_order("exponential", in, 6.0, kappa, 4.0, 5.0, 3001);
  }
  if (name == "super") {
    const double alpha = param1 > 0.0 ? param1 : 0.5;
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
    const double probe = 3.5;
    const EckmannConditions cond = check_eckmann_conditions(in, probe);
    if (cond.ok)
      throw ConstructionError("super: expected the first-order route to be "
                              "inadmissible");
    IntermediateState st = build_second_order(in, probe);
    st.k = cond.k;
    st.c_F = 0.5 / std::min(st.a, st.b);
    return perturbation_step(st, in.V, 1.0, 4.0, 3.7, 2501, "super");
  }
  throw ConfigError("unknown eckmann example: " + name);
}

nlohmann::ordered_json EckmannReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["x0"] = x0;
  j["a"] = a;
  j["k"] = k;
  j["b"] = b;
  j["c_F"] = c_F;
  j["second_order"] = second_order;
  j["seam"] = {{"f_jump", f_jump}, {"fp_jump", fp_jump}};
  if (second_order)
    j["edge_ratios"] = {{"g2_over_F0", g2_ratio}, {"gp_over_F0", gp_ratio}};
  j["wkb_closure_sup"] = wkb_closure_sup;
  j["lambda0"] = lambda0;
  j["gap"] = gap;
  j["final_gap"] = final_gap;
  j["log_c1_bound"] = log_c1_bound;
  j["log_gamma1_bound"] = log_gamma1_bound;
  j["gap_ok"] = gap_ok;
  j["finiteness"] = hypercon::to_json(finiteness);
  j["battery"] = hypercon::to_json(battery);
  j["ok"] = ok;
  return j;
}

MalrieuRobertoReport malrieu_roberto(double beta, double L, int n) {
  if (!(std::abs(beta) < 2.0)) throw DomainError("malrieu_roberto: |beta| >= 2");
  MalrieuRobertoReport rep;
  rep.beta = beta;
  const double ab = std::abs(beta);
  const double rho = 2.0 - ab;
  rep.c = 1.0 / rho;
  rep.kappa = 0.9 * (0.5 / rep.c) / ((2.0 + ab) * (2.0 + ab));
  rep.nu = 3.0;

  const Grid g = Grid::uniform(-L, L, n);
  // Envelope 0 <= U <= x^2 (2+|beta|)^2 and the finiteness ladder.
  rep.envelope_ok = true;
  for (double x : g.nodes) {
    const double U = x * x * (2.0 + beta * std::cos(x)) * (2.0 + beta * std::cos(x)) -
                     x * x * rho * rho;
    if (U < -1e-12 || U > x * x * (2.0 + ab) * (2.0 + ab) + 1e-12)
      rep.envelope_ok = false;
  }

  auto V1_fn = [beta, rho](double x) {
    const double Fp = 2.0 * x + beta * (std::sin(x) + x * std::cos(x));
    const double Fpp = 2.0 + beta * (2.0 * std::cos(x) - x * std::sin(x));
    return -Fpp + Fp * Fp - rho * rho * x * x;
  };
  for (double kp : {0.5 * rep.kappa, rep.kappa}) {
    CheckRecord rec = widening_record(
        "mr_kappa_finiteness", "malrieu_roberto",
        [&](double x) { return kp * V1_fn(x) - rho * x * x; }, L, 4 * n, true);
    rec.details["kappa"] = kp;
    rep.finiteness.push_back(std::move(rec));
  }

  // Non-convexity witness far out: F'' = 2 + beta (2 cos x - x sin x).
  for (double x = 10.0; x < 60.0; x += 0.01) {
    const double fpp = 2.0 + beta * (2.0 * std::cos(x) - x * std::sin(x));
    if (fpp < -1.0) {
      rep.nonconvexity_x = x;
      rep.nonconvexity_value = fpp;
      break;
    }
  }

  // Consecutive split against the direct solve over Lebesgue measure.
  WeightedGridMeasure leb = build_measure(g, constant_density(), false);
  std::vector<double> V0(g.n), V1(g.n);
  for (int i = 0; i < g.n; ++i) {
    V0[i] = rho * rho * g.nodes[i] * g.nodes[i];
    V1[i] = V1_fn(g.nodes[i]);
  }
  rep.split = consecutive_transform_check(leb, V0, V1);

  Instance inst = make_malrieu_roberto_relative(beta, L, n, rep.kappa, rep.nu);
  bool dummy_gap_ok = false;
  double log_gamma1 = 0.0;
  run_bound_battery(inst, rep.battery, rep.final_gap, rep.log_c1_bound, log_gamma1,
                    dummy_gap_ok);
  rep.gap_ok = dummy_gap_ok;
  rep.ok = rep.envelope_ok && rep.gap_ok && rep.nonconvexity_value < -1.0 &&
           rep.split.sup_psi_diff < 1e-3 && rep.split.lambda_residual < 1e-4;
  for (const auto& rec : rep.finiteness) rep.ok = rep.ok && rec.ok;
  for (const auto& rec : rep.battery) rep.ok = rep.ok && rec.ok;
  return rep;
}

nlohmann::ordered_json MalrieuRobertoReport::to_json() const {
  nlohmann::ordered_json j;
  j["beta"] = beta;
  j["c"] = c;
  j["kappa"] = kappa;
  j["nu"] = nu;
  j["envelope_ok"] = envelope_ok;
  j["nonconvexity"] = {{"x", nonconvexity_x}, {"F_second", nonconvexity_value}};
  j["split"] = {{"sup_psi_diff", split.sup_psi_diff},
                {"lambda_residual", split.lambda_residual},
                {"lambda", split.lambda},
                {"lambda1", split.lambda1},
                {"lambda2", split.lambda2}};
  j["final_gap"] = final_gap;
  j["log_c1_bound"] = log_c1_bound;
  j["gap_ok"] = gap_ok;
  j["finiteness"] = hypercon::to_json(finiteness);
  j["battery"] = hypercon::to_json(battery);
  j["ok"] = ok;
  return j;
}

ToyModelReport toy_model_constants(int dimension, double lambda, double a_norm) {
  if (dimension < 1) throw DomainError("toy_model_constants: dimension must be >= 1");
  if (!(lambda > 0.0)) throw DomainError("toy_model_constants: lambda must be > 0");
  if (!(a_norm >= 0.0)) throw DomainError("toy_model_constants: A norm must be >= 0");

  ToyModelReport rep;
  rep.dimension = dimension;
  rep.lambda = lambda;
  rep.a_norm = a_norm;
  rep.factor = run_eckmann_example("power", 2.0, lambda);
  rep.factor_c1_log = rep.factor.log_c1_bound;
  std::vector<double> comps(dimension, rep.factor.c_F);
  rep.tensor_c = tensorize_lsi(comps);

  // e^{alpha b x^2} against the cubic tail of the quartic intermediate
  // density, in log space; always stabilizes under widening.
  const double sq = std::sqrt(lambda);
  const double b = rep.factor.b;
  for (double alpha : {1.0, 2.0, std::max(1.0, 50.0 / std::max(a_norm, 1e-9))}) {
    const double q = alpha * std::max(a_norm, b);
    const double peak = q / sq;  // maximizer of q x^2 - 2 sqrt(lambda) x^3 / 3
    const double L = std::max(4.0, 2.5 * peak);
    CheckRecord rec = widening_record(
        "toy_gaussian_tail_dominance", "toy",
        [&](double x) {
          const double ax = std::abs(x);
          const double F = ax <= 1.0 ? 0.5 * b * x * x
                                     : sq * (ax * ax * ax - 1.0) / 3.0 + 0.5 * b;
          return q * x * x - 2.0 * F;
        },
        L, 20000, true);
    rec.details["alpha_b"] = q;
    rep.admissibility.push_back(std::move(rec));
  }
  rep.ok = rep.factor.ok;
  for (const auto& rec : rep.admissibility) rep.ok = rep.ok && rec.ok;
  return rep;
}

nlohmann::ordered_json ToyModelReport::to_json() const {
  nlohmann::ordered_json j;
  j["dimension"] = dimension;
  j["lambda"] = lambda;
  j["a_norm"] = a_norm;
  j["factor_c1_log"] = factor_c1_log;
  j["tensor_c"] = tensor_c;
  j["admissibility"] = hypercon::to_json(admissibility);
  j["factor"] = factor.to_json();
  j["ok"] = ok;
  return j;
}

}  // namespace hypercon
