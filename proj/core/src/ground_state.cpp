#include "hypercon/ground_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "hypercon/operators.hpp"

namespace hypercon {

namespace {

constexpr double kPsiFloor = 5e-308;  // keep F = -log psi finite

std::vector<double> shifted(std::span<const double> v, double shift) {
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x += shift;
  return out;
}

std::vector<double> negated(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x = -x;
  return out;
}

}  // namespace

GroundStateMeasure transform(const WeightedGridMeasure& m, std::span<const double> V) {
  GroundStateMeasure gsm;
  gsm.base = m;
  gsm.state = ground_state(schrodinger_operator(m, V));

  const int n = m.size();
  std::vector<double> psi2_density(n);
  for (int i = 0; i < n; ++i) {
    const double p = std::max(gsm.state.psi[i], 0.0);
    psi2_density[i] = p * p * m.density[i];
  }
  gsm.psi_measure = build_measure(m.grid, std::move(psi2_density), false);
  if (std::abs(gsm.psi_measure.total_mass - 1.0) < 1e-8)
    gsm.psi_measure.probability = true;

  gsm.F.resize(n);
  for (int i = 0; i < n; ++i)
    gsm.F[i] = -std::log(std::max(gsm.state.psi[i], kPsiFloor));
  gsm.gradF = gradient(m.grid, gsm.F);
  return gsm;
}

Instance make_instance(std::string name, const LsiParams& params,
                       WeightedGridMeasure m, std::vector<double> V) {
  Instance inst;
  inst.name = std::move(name);
  inst.params = params;
  inst.gsm = transform(m, V);
  inst.m = std::move(m);
  inst.V = std::move(V);
  const double l0 = inst.lambda0();
  inst.log_norm_evl_kappa =
      log_lp_norm_exp(inst.m, shifted(inst.V, -l0), params.kappa);
  inst.log_norm_elv_nu =
      log_lp_norm_exp(inst.m, shifted(negated(inst.V), l0), params.nu);
  inst.log_M = log_lp_norm_exp(inst.m, inst.V, params.kappa) +
               log_lp_norm_exp(inst.m, negated(inst.V), params.nu);
  inst.M = std::exp(inst.log_M);
  return inst;
}

double intertwining_residual(const Instance& inst) {
  const TridiagonalOperator H = schrodinger_operator(inst.m, inst.V);
  const double l0 = inst.lambda0();
  const auto& psi = inst.gsm.state.psi;
  double worst = 0.0;
  for (const auto& u : default_test_functions(inst.m.grid, 5)) {
    std::vector<double> upsi(u.size()), upsi2(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      upsi[i] = u[i] * psi[i];
      upsi2[i] = upsi[i] * upsi[i];
    }
    const double lhs = H.form(upsi, upsi) - l0 * integrate(inst.m, upsi2);
    const double rhs = dirichlet_energy(inst.gsm.psi_measure, u, u);
    worst = std::max(worst, std::abs(lhs - rhs) / (std::abs(rhs) + 1.0));
  }
  return worst;
}

std::vector<double> wkb_potential(const WeightedGridMeasure& m,
                                  std::span<const double> F) {
  std::vector<double> out = dirichlet_operator(m).apply(F);
  const std::vector<double> dF = gradient(m.grid, F);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += dF[i] * dF[i];
  return out;
}

WkbResidual wkb_residual(const GroundStateMeasure& gsm, std::span<const double> V) {
  const int n = gsm.base.size();
  for (int i = 1; i + 1 < n; ++i)
    if (!(gsm.state.psi[i] > 0.0))
      throw DomainError("wkb_residual: psi vanishes at an interior node");
  const std::vector<double> W = wkb_potential(gsm.base, gsm.F);
  const double l0 = gsm.state.lambda0;
  const double peak_density =
      *std::max_element(gsm.base.density.begin(), gsm.base.density.end());

  WkbResidual r;
  double acc = 0.0, wsum = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double res = std::abs(W[i] - (V[i] - l0));
    r.linf_interior = std::max(r.linf_interior, res);
    if (gsm.base.density[i] >= 1e-3 * peak_density)
      r.linf_bulk = std::max(r.linf_bulk, res);
    acc += res * res * gsm.base.weights[i];
    wsum += gsm.base.weights[i];
  }
  r.l2_m = std::sqrt(acc / wsum);
  return r;
}

double aida_identity_residual(const GroundStateMeasure& gsm,
                              std::span<const double> V,
                              const std::function<double(double)>& v,
                              const std::function<double(double)>& v_prime) {
  const int n = gsm.base.size();
  const double l0 = gsm.state.lambda0;
  double lhs = 0.0, rhs = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double f = gsm.F[i];
    const double g2 = gsm.gradF[i] * gsm.gradF[i];
    lhs += (v_prime(f) + v(f)) * g2 * gsm.base.weights[i];
    rhs += v(f) * (V[i] - l0) * gsm.base.weights[i];
  }
  return std::abs(lhs - rhs);
}

CheckRecord aida_halfline_check(const Instance& inst, double level) {
  const int n = inst.m.size();
  const double l0 = inst.lambda0();
  double lhs = 0.0, rhs = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    if (inst.gsm.F[i] >= level) {
      lhs += inst.gsm.gradF[i] * inst.gsm.gradF[i] * inst.m.weights[i];
      rhs += (inst.V[i] - l0) * inst.m.weights[i];
    }
  }
  CheckRecord r = CheckRecord::one_sided("aida_halfline", inst.name, lhs, rhs, 1e-4);
  r.details["level"] = level;
  return r;
}

Lambda0Certificate lambda0_certificate(const Instance& inst, double rel_tol) {
  Lambda0Certificate c;
  c.lambda0 = inst.lambda0();
  c.federbush_lower = -log_lp_norm_exp(inst.m, negated(inst.V), inst.params.nu);
  c.aida_upper = log_lp_norm_exp(inst.m, inst.V, inst.params.kappa);
  c.mean_upper = integrate(inst.m, inst.V);
  c.log_norm_evl_kappa = inst.log_norm_evl_kappa;
  c.log_norm_elv_nu = inst.log_norm_elv_nu;
  c.M = inst.M;
  const double scale = rel_tol * (1.0 + std::abs(c.lambda0));
  c.sandwich_ok = c.federbush_lower <= c.lambda0 + scale &&
                  c.lambda0 <= std::min(c.aida_upper, c.mean_upper) + scale;
  c.product_residual =
      std::abs(c.log_norm_evl_kappa + c.log_norm_elv_nu - inst.log_M);
  c.product_ok = c.product_residual <= rel_tol * (1.0 + std::abs(inst.log_M));
  return c;
}

CheckRecord moment_product_check(const Instance& inst, double r, double s) {
  const double expo = moment_product_exponent(inst.params, r, s);
  const double log_lhs = log_lp_norm_exp(inst.m, negated(inst.gsm.F), r) +
                         log_lp_norm_exp(inst.m, inst.gsm.F, s);
  const double log_rhs = expo * inst.log_norm_evl_kappa;
  CheckRecord rec;
  rec.check = "moment_product";
  rec.instance = inst.name;
  rec.lhs = std::exp(log_lhs);
  rec.rhs = std::exp(log_rhs);
  rec.slack = log_rhs - log_lhs;
  rec.ok = log_lhs <= log_rhs + 1e-6;
  rec.details["r"] = r;
  rec.details["s"] = s;
  rec.details["exponent"] = expo;
  rec.details["log_lhs"] = log_lhs;
  rec.details["log_rhs"] = log_rhs;
  return rec;
}

CheckRecord local_moment_product_check(const Instance& inst, double r, double s,
                                       double delta) {
  const MomentRoots mr = moment_roots(inst.params);
  if (!(r > 0.0 && r < mr.r0) || !(s > 0.0 && s < mr.s0))
    throw DomainError("local_moment_product_check: (r, s) outside rectangle");
  const double expo = moment_product_exponent(inst.params, r, s);
  const int n = inst.m.size();
  const double l0 = inst.lambda0();
  const double log_delta = std::log(delta);

  std::vector<double> log_psi_delta(n), restricted(n);
  for (int i = 0; i < n; ++i) {
    const bool small = inst.gsm.state.psi[i] <= delta;
    log_psi_delta[i] = small ? -inst.gsm.F[i] : log_delta;
    restricted[i] = small ? inst.V[i] - l0 : 0.0;
  }
  std::vector<double> neg(n);
  for (int i = 0; i < n; ++i) neg[i] = -log_psi_delta[i];
  const double log_lhs = log_lp_norm_exp(inst.m, log_psi_delta, r) +
                         log_lp_norm_exp(inst.m, neg, s);
  const double log_rhs = expo * log_lp_norm_exp(inst.m, restricted, inst.params.kappa);

  CheckRecord rec;
  rec.check = "local_moment_product";
  rec.instance = inst.name;
  rec.lhs = std::exp(log_lhs);
  rec.rhs = std::exp(log_rhs);
  rec.slack = log_rhs - log_lhs;
  rec.ok = log_lhs <= log_rhs + 1e-6;
  rec.details["r"] = r;
  rec.details["s"] = s;
  rec.details["delta"] = delta;
  return rec;
}

std::vector<CheckRecord> psi_inverse_bound_check(const Instance& inst, double s) {
  const MomentRoots mr = moment_roots(inst.params);
  if (!(s > 0.0 && s < mr.s0))
    throw DomainError("psi_inverse_bound_check: s outside (0, s0)");
  const double cnu = sobolev_coefficient(inst.params);
  const double a = (2.0 / s + 1.0) * cnu;
  const double sigma = 2.0 * cnu * mr.b_kappa;  // default choice
  const double expo = ell(inst.params, a) + ell(inst.params, sigma);
  const double log_lhs = log_lp_norm_exp(inst.m, inst.gsm.F, s);

  std::vector<CheckRecord> out;
  auto push = [&](const char* name, double log_rhs, nlohmann::ordered_json extra) {
    CheckRecord rec;
    rec.check = name;
    rec.instance = inst.name;
    rec.lhs = std::exp(log_lhs);
    rec.rhs = std::exp(log_rhs);
    rec.slack = log_rhs - log_lhs;
    rec.ok = log_lhs <= log_rhs + 1e-6;
    rec.details = std::move(extra);
    rec.details["s"] = s;
    out.push_back(std::move(rec));
  };

  push("psi_inverse_split_bound",
       expo * inst.log_norm_evl_kappa + sigma * inst.log_norm_elv_nu,
       {{"a", a}, {"sigma", sigma}});
  push("psi_inverse_M_bound", (expo + sigma) * inst.log_M,
       {{"exponent", expo + sigma}});
  const double ss = sigma_star(inst.params, s);
  push("psi_inverse_sigma_star_bound", ss * inst.log_M, {{"sigma_star", ss}});
  return out;
}

DistributionStats distribution_stats(const GroundStateMeasure& gsm, double eps,
                                     double K) {
  if (!(eps > 0.0 && eps < 1.0 && K > 1.0))
    throw DomainError("distribution_stats: need 0 < eps < 1 < K");
  DistributionStats st;
  st.eps = eps;
  st.K = K;
  const int n = gsm.base.size();
  for (int i = 0; i < n; ++i) {
    const double p = gsm.state.psi[i];
    if (p <= eps) st.A_eps += gsm.base.weights[i];
    if (p > K) st.C_K += p * p * gsm.base.weights[i];
  }
  for (int i = 1; i + 1 < n; ++i)
    if (gsm.state.psi[i] <= eps)
      st.B_eps += gsm.gradF[i] * gsm.gradF[i] * gsm.base.weights[i];
  return st;
}

std::vector<CheckRecord> distribution_bound_checks(const Instance& inst, double eps,
                                                   double K) {
  const DistributionStats st = distribution_stats(inst.gsm, eps, K);
  const LsiParams& p = inst.params;
  const double bk = b_kappa(p);
  const double an = a_nu(p);
  const double cnu = sobolev_coefficient(p);
  const double a = 2.0 * cnu * bk;
  const double s1 = 1.0 / (bk - 0.5);
  const double alpha1 = a + p.c * std::log(3.0) / bk;

  std::vector<CheckRecord> out;
  const double b1 = std::exp(s1 * (std::log(eps) + alpha1 * inst.log_M));
  out.push_back(CheckRecord::one_sided("distribution_A_bound", inst.name, st.A_eps, b1));
  out.back().details = {{"eps", eps}};

  const double b2 =
      std::sqrt(st.A_eps) * std::exp(p.kappa * inst.log_M) / p.kappa;
  out.push_back(CheckRecord::one_sided("distribution_B_bound", inst.name, st.B_eps, b2));
  out.back().details = {{"eps", eps}};

  const double tail_exp = std::log(3.0) / (0.5 / p.c - 1.0 / p.nu);
  const double b3 =
      std::exp(an / (2.0 - an) * (tail_exp * inst.log_M - std::log(K * K)));
  out.push_back(CheckRecord::one_sided("distribution_C_bound", inst.name, st.C_K, b3));
  out.back().details = {{"K", K}};
  return out;
}

std::vector<CheckRecord> dlsi_check(const Instance& inst, double a, double sigma,
                                    const std::vector<std::vector<double>>& test_fns) {
  const LsiParams& p = inst.params;
  const double cnu = sobolev_coefficient(p);
  const double edge = b_kappa(p) * cnu;
  if (!(a > edge) || !(sigma > edge))
    throw DomainError("dlsi_check: a, sigma must exceed b_kappa * c_nu");

  const double s_meas = 2.0 * cnu / (a - cnu);
  const double defect_measured =
      2.0 * (log_lp_norm_exp(inst.m, inst.gsm.F, s_meas) +
             a * inst.log_norm_elv_nu);
  const double defect_power = dlsi_defect(p, inst.M, a, sigma);

  const WeightedGridMeasure& mp = inst.gsm.psi_measure;
  struct Variant {
    const char* name;
    double defect;
    double worst_slack = std::numeric_limits<double>::infinity();
    double lhs = 0.0, rhs = 0.0;
  };
  std::array<Variant, 2> variants{{Variant{"dlsi_measured_defect", defect_measured},
                                   Variant{"dlsi_M_defect", defect_power}}};

  for (const auto& u : test_fns) {
    std::vector<double> u2(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) u2[i] = u[i] * u[i];
    const double ent = entropy(mp, u2);
    const double energy = dirichlet_energy(mp, u, u);
    const double mass = integrate(mp, u2);
    for (auto& v : variants) {
      const double rhs = 2.0 * a * energy + v.defect * mass;
      if (rhs - ent < v.worst_slack) {
        v.worst_slack = rhs - ent;
        v.lhs = ent;
        v.rhs = rhs;
      }
    }
  }

  std::vector<CheckRecord> out;
  for (const auto& v : variants) {
    CheckRecord rec = CheckRecord::one_sided(v.name, inst.name, v.lhs, v.rhs);
    rec.details = {{"a", a},
                   {"sigma", sigma},
                   {"defect", v.defect},
                   {"test_functions", test_fns.size()}};
    out.push_back(std::move(rec));
  }
  return out;
}

ConsecutiveTransformResult consecutive_transform_check(const WeightedGridMeasure& m,
                                                       std::span<const double> V1,
                                                       std::span<const double> V2) {
  const int n = m.size();
  std::vector<double> Vsum(n);
  for (int i = 0; i < n; ++i) Vsum[i] = V1[i] + V2[i];

  const GroundStateMeasure full = transform(m, Vsum);
  const GroundStateMeasure first = transform(m, V1);
  const GroundStateMeasure second = transform(first.psi_measure, V2);

  ConsecutiveTransformResult res;
  res.lambda = full.state.lambda0;
  res.lambda1 = first.state.lambda0;
  res.lambda2 = second.state.lambda0;
  res.lambda_residual = std::abs(res.lambda - res.lambda1 - res.lambda2);
  for (int i = 0; i < n; ++i) {
    const double prod = first.state.psi[i] * second.state.psi[i];
    res.sup_psi_diff = std::max(res.sup_psi_diff, std::abs(full.state.psi[i] - prod));
  }
  return res;
}

AidaGapEstimate aida_gap_estimate(const GroundStateMeasure& gsm, double gamma,
                                  double B, double D) {
  if (!(gamma > 0.0) || !(B > 0.0) || !(D >= 0.0))
    throw DomainError("aida_gap_estimate: need gamma > 0, B > 0, D >= 0");
  double grad_energy = 0.0;
  for (int i = 1; i + 1 < gsm.base.size(); ++i)
    grad_energy += gsm.gradF[i] * gsm.gradF[i] * gsm.base.weights[i];
  if (!std::isfinite(grad_energy))
    throw DomainError("aida_gap_estimate: int |grad F|^2 dm is not finite");

  AidaGapEstimate est;
  const double de = D + 1.0 / std::exp(1.0);
  est.log_R = 6.0 * de;
  const double log_budget = -std::log(3.0) - 12.0 * de;  // log(1/3) - log R^2

  const double psi_max =
      *std::max_element(gsm.state.psi.begin(), gsm.state.psi.end());
  double K = 2.0;
  while (true) {
    const double cK = distribution_stats(gsm, 0.5, K).C_K;
    if (cK <= 0.0 || std::log(8.0 * cK) <= log_budget) break;  // 4 C_K R^2 <= 1/6
    K *= 2.0;
    if (K > 4.0 * psi_max && K > 1e12)
      throw InfeasibleOnGrid("aida_gap_estimate: C_K cannot be made small enough");
  }

  double psi_min = psi_max;
  for (double v : gsm.state.psi)
    if (v > 0.0) psi_min = std::min(psi_min, v);
  double max_grad2 = 0.0;
  for (int i = 1; i + 1 < gsm.base.size(); ++i)
    max_grad2 = std::max(max_grad2, gsm.gradF[i] * gsm.gradF[i]);

  auto region_term = [&](double A, double Bq) {
    return 2.0 * K * K * (2.0 * gamma * Bq + A);
  };

  double eps = 0.5;
  bool found = false;
  while (true) {
    const DistributionStats st = distribution_stats(gsm, eps, K);
    const double lhs = region_term(st.A_eps, st.B_eps);
    if (lhs <= 0.0 || std::log(3.0 * lhs) <= log_budget) {  // 2K^2(...) R^2 <= 1/6
      found = true;
      break;
    }
    if (eps < 0.25 * psi_min || eps < 1e-300) break;
    eps *= 0.5;
  }

  if (found && eps >= psi_min) {
    est.feasible = true;
    est.diagnostics = "threshold set resolved on grid";
  } else {
    // The required level set lies below every resolved psi value.  Certify
    // with the boundary tail mass if it fits inside the budget, otherwise
    // report the resolution failure.
    double tail_mass = 0.0;
    const int n = gsm.base.size();
    for (int i : {0, 1, n - 2, n - 1}) tail_mass += gsm.base.weights[i];
    const double lhs = region_term(tail_mass, tail_mass * max_grad2);
    if (lhs <= 0.0 || std::log(3.0 * lhs) <= log_budget) {
      est.feasible = true;
      est.diagnostics = "certified by boundary tail mass";
      found = true;
    } else if (found) {
      est.feasible = false;
      est.diagnostics =
          "eps below resolved psi range; zero-mass extrapolation not certifiable";
    } else {
      throw InfeasibleOnGrid(
          "aida_gap_estimate: required eps falls below the grid's psi resolution");
    }
  }

  est.eps = eps;
  est.K = K;
  est.gamma1 = B + 8.0 * gamma * (K / eps) * (K / eps);
  return est;
}

double entropy_split_residual(const GroundStateMeasure& gsm,
                              std::span<const double> u) {
  const int n = gsm.base.size();
  std::vector<double> u2(n), f2(n), f2F(n);
  for (int i = 0; i < n; ++i) {
    u2[i] = u[i] * u[i];
    const double f = u[i] * gsm.state.psi[i];
    f2[i] = f * f;
    f2F[i] = f * f * 2.0 * gsm.F[i];
  }
  return entropy(gsm.psi_measure, u2) - entropy(gsm.base, f2) -
         integrate(gsm.base, f2F);
}

std::vector<std::vector<double>> default_test_functions(const Grid& g, int count) {
  std::vector<std::vector<double>> fns;
  const double span = std::max(std::abs(g.x_min), std::abs(g.x_max));
  auto add = [&](const std::function<double(double)>& f) {
    if (static_cast<int>(fns.size()) < count) fns.push_back(sample(g, f));
  };
  add([](double) { return 1.0; });
  add([&](double x) { return x / span; });
  add([&](double x) { return x * x / (span * span); });
  add([](double x) { return std::sin(x); });
  add([](double x) { return std::cos(x); });
  add([](double x) { return std::exp(-0.25 * x * x); });
  add([](double x) { return x * std::exp(-0.125 * x * x); });
  add([](double x) { return 1.0 / (1.0 + x * x); });
  add([](double x) { return std::sin(2.0 * x) * std::exp(-0.1 * x * x); });
  add([&](double x) { return (x * x * x) / (span * span * span) + 0.5; });
  return fns;
}

}  // namespace hypercon
