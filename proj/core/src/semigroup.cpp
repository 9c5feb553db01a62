#include "hypercon/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tridiag_lu.hpp"

namespace hypercon {

namespace {

const double kSqrtPi = std::sqrt(std::acos(-1.0));

std::vector<double> to_phi(const WeightedGridMeasure& m, std::span<const double> f) {
  std::vector<double> phi(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) phi[i] = f[i] * std::sqrt(m.weights[i]);
  return phi;
}

std::vector<double> to_function(const WeightedGridMeasure& m,
                                std::span<const double> phi) {
  std::vector<double> f(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) f[i] = phi[i] / std::sqrt(m.weights[i]);
  return f;
}

// Composite Simpson on [lo, hi]; guard for the analytic widening tests.
template <class F>
double simpson(F&& f, double lo, double hi, int n = 4000) {
  if (n % 2) ++n;
  const double h = (hi - lo) / n;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

SemigroupRun propagate(const TridiagonalOperator& op, std::span<const double> f0,
                       double t_end, double dt, std::span<const double> norm_indices,
                       int n_samples) {
  if (!(dt > 0.0) || !(t_end >= 0.0))
    throw DomainError("propagate: need dt > 0, t_end >= 0");
  double diag_scale = 0.0;
  for (double d : op.diag) diag_scale = std::max(diag_scale, std::abs(d));
  if (dt * diag_scale > 1e3)
    throw StepSizeError("propagate: dt too coarse for the stiffest mode");

  const int n = op.size();
  if (t_end == 0.0) {
    SemigroupRun run;
    run.op = op;
    run.dt = dt;
    run.times.push_back(0.0);
    run.states.emplace_back(f0.begin(), f0.end());
    for (double p : norm_indices)
      run.norm_curves[p].push_back(lp_norm(op.measure, f0, p));
    return run;
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-12)));
  const double step = t_end / steps;

  // (I + dt/2 S) phi_+ = (I - dt/2 S) phi
  std::vector<double> lower(op.offdiag.begin(), op.offdiag.end());
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = 1.0 + 0.5 * step * op.diag[i];
  for (double& v : lower) v *= 0.5 * step;
  const detail::TridiagLU lu(lower, std::move(diag), lower);

  auto rhs_apply = [&](std::span<const double> phi) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
      double acc = (1.0 - 0.5 * step * op.diag[i]) * phi[i];
      if (i > 0) acc -= 0.5 * step * op.offdiag[i - 1] * phi[i - 1];
      if (i + 1 < n) acc -= 0.5 * step * op.offdiag[i] * phi[i + 1];
      out[i] = acc;
    }
    return out;
  };

  SemigroupRun run;
  run.op = op;
  run.dt = step;
  const int sample_every =
      std::max(1, steps / std::max(1, n_samples));

  std::vector<double> phi = to_phi(op.measure, f0);
  auto record = [&](double t, std::span<const double> ph) {
    run.times.push_back(t);
    std::vector<double> f = to_function(op.measure, ph);
    for (double p : norm_indices)
      run.norm_curves[p].push_back(lp_norm(op.measure, f, p));
    run.states.push_back(std::move(f));
  };
  record(0.0, phi);
  for (int k = 1; k <= steps; ++k) {
    phi = lu.solve(rhs_apply(phi));
    if (k == steps || k % sample_every == 0) record(k * step, phi);
  }
  return run;
}

HyperboundednessProbe hyperboundedness_probe(
    const WeightedGridMeasure& m, std::span<const double> V, const LsiParams& params,
    double q, double p, double t, const std::vector<std::vector<double>>& trials) {
  const IntervalRoots roots = interval_roots(params);
  if (!(q > roots.q0 && q <= p && p < roots.p0))
    throw DomainError("hyperboundedness_probe: need q0 < q <= p < p0");
  const double t_min = tau(params, p) - tau(params, q);
  if (!(t >= t_min - 1e-12))
    throw DomainError("hyperboundedness_probe: t below tau(p) - tau(q)");

  std::vector<std::vector<double>> battery = trials;
  if (battery.empty()) {
    // Hermite-like polynomials, bare and Gaussian-damped.
    const auto& x = m.grid.nodes;
    auto add = [&](auto&& fn) {
      std::vector<double> f(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) f[i] = fn(x[i]);
      battery.push_back(std::move(f));
    };
    auto he = [](int k, double x) {
      switch (k) {
        case 0: return 1.0;
        case 1: return x;
        case 2: return x * x - 1.0;
        case 3: return x * (x * x - 3.0);
        default: return x * x * (x * x - 6.0) + 3.0;
      }
    };
    for (int k = 0; k <= 4; ++k) add([&, k](double x) { return he(k, x); });
    for (int k = 0; k <= 4; ++k)
      add([&, k](double x) { return he(k, x) * std::exp(-0.125 * x * x); });
  }

  const TridiagonalOperator H = schrodinger_operator(m, V);
  HyperboundednessProbe probe;
  probe.t = t;
  probe.q = q;
  probe.p = p;
  const double dt = std::max(t / 400.0, 1e-5);
  for (const auto& f : battery) {
    const double nq = lp_norm(m, f, q);
    if (!(nq > 0.0)) continue;
    const SemigroupRun run = propagate(H, f, t, dt, {}, 1);
    const double np = lp_norm(m, run.states.back(), p);
    probe.empirical_ratio = std::max(probe.empirical_ratio, np / nq);
  }
  std::vector<double> negV(V.begin(), V.end());
  for (double& v : negV) v = -v;
  probe.bound = std::exp(t * log_lp_norm_exp(m, negV, params.nu));
  probe.ok = probe.empirical_ratio <= probe.bound * (1.0 + 1e-6);
  return probe;
}

double GaussianFlow::s_at(double t) const {
  if (times.empty() || t < times.front() || t > times.back() + 1e-12)
    throw DomainError("GaussianFlow: t outside trajectory");
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  std::size_t hi = std::min<std::size_t>(it - times.begin(), times.size() - 1);
  if (hi == 0) return s.front();
  const double w = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
  return (1.0 - w) * s[hi - 1] + w * s[hi];
}

double GaussianFlow::b_at(double t) const {
  if (times.empty() || t < times.front() || t > times.back() + 1e-12)
    throw DomainError("GaussianFlow: t outside trajectory");
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  std::size_t hi = std::min<std::size_t>(it - times.begin(), times.size() - 1);
  if (hi == 0) return b.front();
  const double w = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
  return (1.0 - w) * b[hi - 1] + w * b[hi];
}

GaussianFlow gaussian_flow(double a, double s_start, double t_end, double dt) {
  if (!(s_start < 0.5)) throw DomainError("gaussian_flow: s_start must be < 1/2");
  if (!(t_end > 0.0) || !(dt > 0.0))
    throw DomainError("gaussian_flow: need t_end > 0, dt > 0");

  GaussianFlow flow;
  flow.a = a;
  auto fs = [a](double s) { return 4.0 * s * s - 4.0 * s + a; };

  double t = 0.0, s = s_start, b = 0.0;
  flow.times.push_back(t);
  flow.s.push_back(s);
  flow.b.push_back(b);
  const double cap = 0.5 - 1e-9;
  while (t < t_end - 1e-15) {
    const double h = std::min(dt, t_end - t);
    // RK4 on (s, b)
    const double k1s = fs(s), k1b = 2.0 * s;
    const double k2s = fs(s + 0.5 * h * k1s), k2b = 2.0 * (s + 0.5 * h * k1s);
    const double k3s = fs(s + 0.5 * h * k2s), k3b = 2.0 * (s + 0.5 * h * k2s);
    const double k4s = fs(s + h * k3s), k4b = 2.0 * (s + h * k3s);
    double s_next = s + h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
    double b_next = b + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    if (s_next >= cap) {
      flow.hit_half = true;
      s_next = cap;
    }
    t += h;
    s = s_next;
    b = b_next;
    flow.times.push_back(t);
    flow.s.push_back(s);
    flow.b.push_back(b);
    if (flow.hit_half) break;
  }
  flow.t1 = t;

  // Fourth-order central differences of the stored trajectory against the
  // right-hand side, on uniformly spaced unclamped samples only.
  for (std::size_t i = 2; i + 2 < flow.s.size(); ++i) {
    const double h = flow.times[i + 1] - flow.times[i];
    bool uniform = true;
    for (int k = -2; k < 2; ++k)
      uniform = uniform && std::abs((flow.times[i + k + 1] - flow.times[i + k]) - h) <
                               1e-12 * std::max(h, 1e-12);
    if (!uniform || flow.s[i + 2] >= cap) continue;
    const double ds = (-flow.s[i + 2] + 8.0 * flow.s[i + 1] - 8.0 * flow.s[i - 1] +
                       flow.s[i - 2]) /
                      (12.0 * h);
    flow.max_ode_residual =
        std::max(flow.max_ode_residual, std::abs(ds - fs(flow.s[i])));
  }
  return flow;
}

BlowupReport blowup_experiment(double nu, double p1, double L) {
  const LsiParams params{0.5, 1.0, nu};
  const IntervalRoots roots = interval_roots(params);
  if (!(p1 > roots.p0))
    throw DomainError("blowup_experiment: p1 must exceed p0");

  BlowupReport rep;
  rep.nu = nu;
  rep.p1 = p1;
  const double s1 = 1.0 / p1;
  const double margin = std::min(1.0 / nu, 4.0 * s1 * s1 - 4.0 * s1 + 1.0 / nu);
  if (!(margin > 0.0))
    throw ConstructionError("blowup_experiment: no admissible eps");
  rep.eps = 0.5 * margin;
  rep.a = 1.0 / nu - rep.eps;
  const double s_root = 0.5 * (1.0 - std::sqrt(1.0 - rep.a));  // lower rest point
  rep.s_start = 0.5 * s1;
  rep.s_cross = s1;
  rep.s_probe = 0.5 * (s1 + s_root);

  // Run long enough to pass the probe level and to cover tau(4).
  const double tau4 = tau(params, 4.0);
  GaussianFlow flow = gaussian_flow(rep.a, rep.s_start, 16.0 + tau4, 1e-4);
  auto reaches = [&](double level) {
    for (double v : flow.s)
      if (v >= level) return true;
    return false;
  };
  if (!reaches(rep.s_probe))
    flow = gaussian_flow(rep.a, rep.s_start, 256.0 + tau4, 1e-4);
  auto first_time_at = [&](double level) {
    for (std::size_t i = 0; i < flow.s.size(); ++i)
      if (flow.s[i] >= level) return flow.times[i];
    throw ConstructionError("blowup_experiment: flow never reached level");
  };
  rep.t_cross = first_time_at(s1);
  rep.t_probe = first_time_at(rep.s_probe);

  auto gauss_power_integral = [&](double coeff, double bound) {
    // int_{-bound}^{bound} e^{coeff x^2} dgamma, computed in linear space;
    // coefficients stay modest by construction.
    return simpson([&](double x) { return std::exp(coeff * x * x - x * x) / kSqrtPi; },
                   -bound, bound, 20000);
  };

  // Initial state stays p1-integrable under widening.
  const double c0 = p1 * rep.s_start;
  rep.f0_widen_factor = gauss_power_integral(c0, 2.0 * L) / gauss_power_integral(c0, L) - 1.0;
  // e^{-nu V} = e^{nu a x^2} integrable.
  rep.enu_widen_factor =
      gauss_power_integral(nu * rep.a, 2.0 * L) / gauss_power_integral(nu * rep.a, L) - 1.0;
  // Past the crossing the p1-integrand grows; domain doubling blows up.
  const double cp = p1 * rep.s_probe;
  rep.divergence_factor = gauss_power_integral(cp, 2.0 * L) / gauss_power_integral(cp, L);

  // In-interval control: ||f(t)||_4 <= ||e^{-V}||_nu^t ||f(0)||_2 at t = tau(4).
  const double s4 = flow.s_at(tau4);
  const double b4 = flow.b_at(tau4);
  const double lhs =
      std::exp(b4) * std::pow(gauss_power_integral(4.0 * s4, 2.0 * L), 0.25);
  const double log_norm_enu = -std::log(1.0 - nu * rep.a) / (2.0 * nu);
  const double f0_l2 = std::pow(gauss_power_integral(2.0 * rep.s_start, 2.0 * L), 0.5);
  const double rhs = std::exp(tau4 * log_norm_enu) * f0_l2;
  rep.control = CheckRecord::one_sided("blowup_control_p4", "gaussian_negative", lhs, rhs);
  rep.control.details = {{"t", tau4}, {"s", s4}};

  rep.ok = rep.f0_widen_factor < 0.01 && rep.enu_widen_factor < 0.01 &&
           rep.divergence_factor > 10.0 && rep.control.ok;
  return rep;
}

HerbstCurve herbst_curve(const WeightedGridMeasure& m, std::span<const double> g,
                         std::span<const double> t_grid) {
  for (double t : t_grid)
    if (std::abs(t) < 1e-3)
      throw DomainError("herbst_curve: t grid must avoid (-1e-3, 1e-3)");

  const int n = m.size();
  auto log_mgf = [&](double t) {  // log E(e^{t g})
    std::vector<double> tg(n);
    for (int i = 0; i < n; ++i) tg[i] = t * g[i];
    return log_integrate_exp(m, tg);
  };
  auto u_of = [&](double t) { return log_mgf(t) / t; };
  auto ratio = [&](double t) {
    // r = (t E(g e^{tg})/E(e^{tg}) - log E(e^{tg})) / t^2, shift-stabilized
    double peak = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      if (m.weights[i] > 0.0) peak = std::max(peak, t * g[i]);
    double z = 0.0, gz = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = std::exp(t * g[i] - peak) * m.weights[i];
      z += w;
      gz += g[i] * w;
    }
    const double log_e = peak + std::log(z);
    return (t * gz / z - log_e) / (t * t);
  };

  HerbstCurve curve;
  curve.mean_g = integrate(m, g);
  double tmin = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    curve.t.push_back(t);
    curve.u.push_back(u_of(t));
    curve.r.push_back(ratio(t));
    const double dt = 1e-4 * std::max(1.0, std::abs(t));
    curve.u_prime.push_back((u_of(t + dt) - u_of(t - dt)) / (2.0 * dt));
    curve.max_identity_residual = std::max(
        curve.max_identity_residual, std::abs(curve.u_prime.back() - curve.r.back()));
    tmin = std::min(tmin, std::abs(t));
  }
  curve.limit_at_zero = 0.5 * (u_of(tmin) + u_of(-tmin));
  return curve;
}

CheckRecord herbst_product_check(const WeightedGridMeasure& m,
                                 std::span<const double> g, double r, double s,
                                 const std::function<double(double)>& beta,
                                 const std::string& instance) {
  std::vector<double> neg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) neg[i] = -g[i];
  const double log_lhs =
      log_lp_norm_exp(m, neg, r) + log_lp_norm_exp(m, g, s);
  const double log_rhs = simpson(beta, -r, s, 2000);
  CheckRecord rec;
  rec.check = "herbst_product";
  rec.instance = instance;
  rec.lhs = std::exp(log_lhs);
  rec.rhs = std::exp(log_rhs);
  rec.slack = log_rhs - log_lhs;
  rec.ok = log_lhs <= log_rhs + 1e-6;
  rec.details = {{"r", r}, {"s", s}};
  return rec;
}

}  // namespace hypercon
