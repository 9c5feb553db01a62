#include "hypercon/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypercon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog3 = std::log(3.0);

void require_positive(const LsiParams& p) {
  if (!(p.c > 0.0)) throw DomainError("LsiParams: c must be > 0");
  if (!(p.kappa > 0.0)) throw DomainError("LsiParams: kappa must be > 0");
  if (!(p.nu > 0.0)) throw DomainError("LsiParams: nu must be > 0");
}

void require_interval(const LsiParams& p) {
  require_positive(p);
  if (!(p.nu > 2.0 * p.c))
    throw DomainError("interval of validity collapses: nu <= 2c");
}

// Bisection for a continuous strictly monotone function with a bracketed
// root.  Used for the fixed points of ell; closed forms stay primary
// wherever the formulas give them.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-14, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw DomainError("bisect: root not bracketed");
  for (int i = 0; i < max_iter; ++i) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol * std::max(1.0, std::abs(mid))) return mid;
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double a_nu(const LsiParams& p) {
  require_positive(p);
  if (std::isinf(p.nu)) return 1.0;
  if (!(p.nu > 2.0 * p.c)) throw DomainError("a_nu: nu <= 2c");
  return std::sqrt(1.0 - 2.0 * p.c / p.nu);
}

double b_kappa(const LsiParams& p) {
  require_positive(p);
  if (std::isinf(p.kappa)) return 1.0;
  return std::sqrt(1.0 + 2.0 * p.c / p.kappa);
}

double sobolev_coefficient(const LsiParams& p) {
  require_positive(p);
  if (std::isinf(p.nu)) return p.c;
  if (!(p.nu > 2.0 * p.c)) throw DomainError("sobolev_coefficient: nu <= 2c");
  return p.c / (1.0 - 2.0 * p.c / p.nu);
}

IntervalRoots interval_roots(const LsiParams& p) {
  require_interval(p);
  const double a = a_nu(p);
  if (std::isinf(p.nu)) return {1.0, kInf, 1.0};
  const double scale = p.nu / p.c;
  return {scale * (1.0 - a), scale * (1.0 + a), a};
}

double sobolev_coefficient_p(const LsiParams& p, double lebesgue_p) {
  const IntervalRoots r = interval_roots(p);
  if (!(lebesgue_p > r.q0 && lebesgue_p < r.p0))
    throw DomainError("sobolev_coefficient_p: p outside (q0, p0)");
  if (std::isinf(p.nu)) {
    // nu p / ((p0 - p)(p - q0)) -> (c/2) p / (p - 1)
    return 0.5 * p.c * lebesgue_p / (lebesgue_p - 1.0);
  }
  return p.nu * lebesgue_p / ((r.p0 - lebesgue_p) * (lebesgue_p - r.q0));
}

double tau(const LsiParams& p, double lebesgue_p) {
  const IntervalRoots r = interval_roots(p);
  if (!(lebesgue_p > r.q0 && lebesgue_p < r.p0))
    throw DomainError("tau: p outside (q0, p0)");
  const double q0i = 1.0 / r.q0;
  const double p0i = std::isinf(r.p0) ? 0.0 : 1.0 / r.p0;
  const double pi = 1.0 / lebesgue_p;
  return p.c / (2.0 * r.a_nu) * std::log((q0i - pi) / (pi - p0i));
}

double p_of_t(const LsiParams& p, double t) {
  if (!(t >= 0.0)) throw DomainError("p_of_t: t must be >= 0");
  const IntervalRoots r = interval_roots(p);
  const double q0i = 1.0 / r.q0;
  const double p0i = std::isinf(r.p0) ? 0.0 : 1.0 / r.p0;
  const double expo = 2.0 * r.a_nu * t / p.c;
  if (expo > 600.0) {
    if (p0i == 0.0) return std::exp(expo) / q0i;  // Nelson growth, nu = inf
    return 1.0 / p0i;
  }
  // (1 + e^E) / (q0^-1 + e^E p0^-1), evaluated with e^{-E} for stability
  const double em = std::exp(-expo);
  return (em + 1.0) / (q0i * em + p0i);
}

MomentRoots moment_roots(const LsiParams& p) {
  require_positive(p);
  const double b = b_kappa(p);
  if (std::isinf(p.kappa)) return {kInf, 1.0, 1.0};
  return {2.0 / (b - 1.0), 2.0 / (b + 1.0), b};
}

double ell(const LsiParams& p, double t) {
  const double b = b_kappa(p);
  const double edge = b * sobolev_coefficient(p);
  if (!(t > edge)) throw DomainError("ell: t must exceed b_kappa * c_nu");
  return p.c / (2.0 * b) * std::log((t + edge) / (t - edge));
}

double ell_prime(const LsiParams& p, double t) {
  const double b = b_kappa(p);
  const double edge = b * sobolev_coefficient(p);
  if (!(t > edge)) throw DomainError("ell_prime: t must exceed b_kappa * c_nu");
  return -p.c * sobolev_coefficient(p) / (t * t - edge * edge);
}

double ell_fixed_point(const LsiParams& p) {
  const double edge = b_kappa(p) * sobolev_coefficient(p);
  double lo = edge * (1.0 + 1e-14);
  while (!(ell(p, lo) > lo)) lo = edge + (lo - edge) * 0.5;  // ell -> inf at edge
  double hi = std::max(2.0 * edge, edge + 1.0);
  while (ell(p, hi) > hi) hi *= 2.0;
  return bisect([&](double t) { return ell(p, t) - t; }, lo, hi);
}

double ell_plus_t_minimizer(const LsiParams& p) {
  const double edge = b_kappa(p) * sobolev_coefficient(p);
  return std::sqrt(edge * edge + p.c * sobolev_coefficient(p));
}

double sigma_star(const LsiParams& p, double s) {
  const MomentRoots mr = moment_roots(p);
  if (!(s > 0.0 && s < mr.s0)) throw DomainError("sigma_star: s outside (0, s0)");
  const double cnu = sobolev_coefficient(p);
  const double a = (2.0 / s + 1.0) * cnu;
  const double target = ell(p, a);
  const double edge = mr.b_kappa * cnu;
  // sigma - ell(sigma) is strictly increasing from -inf onto all of R
  double lo = edge * (1.0 + 1e-14);
  while (!(lo - ell(p, lo) < target)) lo = edge + (lo - edge) * 0.5;
  double hi = std::max(2.0 * edge, edge + 1.0) + target;
  while (hi - ell(p, hi) < target) hi *= 2.0;
  return bisect([&](double t) { return t - ell(p, t) - target; }, lo, hi);
}

double moment_product_exponent(const LsiParams& p, double r, double s) {
  const MomentRoots mr = moment_roots(p);
  if (!(r > 0.0 && r < mr.r0))
    throw DomainError("moment_product_exponent: r outside (0, r0)");
  if (!(s > 0.0 && s < mr.s0))
    throw DomainError("moment_product_exponent: s outside (0, s0)");
  const double cnu = sobolev_coefficient(p);
  const double a = (2.0 / s + 1.0) * cnu;
  const double sigma = (2.0 / r - 1.0) * cnu;
  return ell(p, a) + ell(p, sigma);
}

double controlling_M(double norm_ev_kappa, double norm_e_negv_nu) {
  if (!(norm_ev_kappa > 0.0) || !(norm_e_negv_nu > 0.0))
    throw DomainError("controlling_M: norms must be positive");
  return norm_ev_kappa * norm_e_negv_nu;
}

double dlsi_defect(const LsiParams& p, double M, double a, double sigma) {
  if (!(M >= 1.0)) throw DomainError("dlsi_defect: M must be >= 1");
  const double edge = b_kappa(p) * sobolev_coefficient(p);
  if (!(a > edge) || !(sigma > edge))
    throw DomainError("dlsi_defect: a, sigma must exceed b_kappa * c_nu");
  const double direct = a + sigma;
  const double dual = ell(p, a) + ell(p, sigma);
  // When the two exponents match (in particular at the fixed point of ell)
  // the norm product collapses to M directly and the defect is half as big;
  // otherwise each factor is bounded by M separately.
  if (std::abs(direct - dual) <= 1e-12 * (direct + dual))
    return 2.0 * direct * std::log(M);
  return 2.0 * (direct + dual) * std::log(M);
}

std::optional<double> wang_gap(double C1, double C2) {
  if (!(C1 > 0.0) || !(C2 >= 0.0)) throw DomainError("wang_gap: C1 > 0, C2 >= 0 required");
  if (!(C2 < std::log(2.0))) return std::nullopt;
  const double b = std::sqrt((1.0 - std::exp(-C2)) / 2.0);
  return std::log(3.0 - 4.0 * b) / (C1 * kLog3);
}

double rothaus_tighten(double C, double C_prime, double D) {
  if (!(C > 0.0) || !(C_prime > 0.0) || !(D >= 0.0))
    throw DomainError("rothaus_tighten: need C > 0, C' > 0, D >= 0");
  return C + C_prime * (0.5 * D + 1.0);
}

GapConstants aida_gap_constants(const LsiParams& p, double M) {
  require_interval(p);
  if (std::isinf(p.kappa))
    throw DomainError("aida_gap_constants: finite kappa required");
  if (!(M >= 1.0)) throw DomainError("aida_gap_constants: M must be >= 1");

  GapConstants g{};
  const double an = a_nu(p);
  const double bk = b_kappa(p);
  const double cnu = sobolev_coefficient(p);
  const double logM = std::log(M);
  const double gamma = p.c;  // base Poincare constant implied by the LSI

  g.a = g.sigma = 2.0 * cnu * bk;
  g.s1 = 1.0 / (bk - 0.5);
  g.alpha1 = g.a + p.c * kLog3 / bk;

  const double tail_exp = kLog3 / (0.5 / p.c - 1.0 / p.nu);  // log3 / ((2c)^-1 - nu^-1)
  const double growth = 2.0 * (4.0 * bk - 1.0) / an - 1.0;

  g.beta1 = tail_exp * (4.0 * bk - 1.0) + 2.0 * g.alpha1;
  g.beta2 = 12.0 * growth;
  g.beta3 = 4.0 * bk - 2.0;
  // 2^{-4/s1} = 2^{2 - 4 b_kappa}; the exact factor from the K^2/eps^2 algebra
  g.beta4 = std::exp(growth * std::log(24.0 * std::exp(12.0 / std::exp(1.0))) +
                     (2.0 - 4.0 * bk) * std::log(2.0));
  g.beta5 = g.beta1 + 2.0 * g.beta2 * (2.0 * g.a + p.c * kLog3 / bk);

  g.defect = 2.0 * (2.0 * g.a + p.c * kLog3 / bk) * logM;
  const double de = g.defect + 1.0 / std::exp(1.0);
  g.log_R = 6.0 * de;

  g.log_K2 = tail_exp * logM + (2.0 - an) / an * std::log(24.0 * std::exp(12.0 * de));
  g.K2 = std::exp(g.log_K2);

  const double mkap = 1.0 + 2.0 * gamma / p.kappa * std::pow(M, p.kappa);
  g.log_eps2 = 4.0 / g.s1 * (-12.0 * de - std::log(12.0) - g.log_K2 - std::log(mkap)) -
               2.0 * g.alpha1 * logM;
  g.eps2 = std::exp(g.log_eps2);

  g.d1 = 2.0 * g.a + 8.0 * p.c * std::pow(1.0 + 2.0 * p.c / p.kappa, g.beta3) * g.beta4;
  g.e1 = g.beta5 + p.kappa * g.beta3;
  g.log_gamma1_bound = std::log(g.d1) + g.e1 * logM;
  g.gamma1_bound = std::exp(g.log_gamma1_bound);
  return g;
}

MainTheoremConstants main_theorem_constants(const LsiParams& p, double M) {
  MainTheoremConstants out{};
  out.gap = aida_gap_constants(p, M);
  const GapConstants& g = out.gap;
  const double logM = std::log(M);
  const double tighten = 1.0 + 0.5 * g.defect;  // 1 + log M^{2a + c log3/b_kappa}

  out.log_c1_bound = g.log_gamma1_bound + std::log(tighten);
  // c1 = a + gamma1 * tighten; fold the additive a into log space
  out.log_c1_bound += std::log1p(g.a / std::exp(std::min(out.log_c1_bound, 700.0)));
  out.c1_bound = g.a + g.gamma1_bound * tighten;

  out.alpha = g.a + g.d1;
  out.beta = g.e1 + 2.0 * g.a + p.c * kLog3 / b_kappa(p);
  out.log_gap_bound = -std::min(out.log_c1_bound, g.log_gamma1_bound);
  out.gap_bound = std::exp(out.log_gap_bound);
  return out;
}

double BoundedPotentialBounds::psi_p_bound(double p) const {
  if (!(p >= 2.0)) throw DomainError("psi_p_bound: p must be >= 2");
  return std::pow(p - 1.0, 0.5 * c * osc_v);
}

double BoundedPotentialBounds::psi_r_lower(double r) const {
  if (!(r > 0.0 && r < 2.0)) throw DomainError("psi_r_lower: r outside (0, 2)");
  const double sigma = c * (2.0 / r - 1.0);
  return std::exp(-sigma * osc_v);
}

double BoundedPotentialBounds::moment_product_bound(double r, double s) const {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("moment_product_bound: r outside (0, 1)");
  if (!(s > 0.0)) throw DomainError("moment_product_bound: s must be > 0");
  return std::pow((1.0 + s) / (1.0 - r), 0.5 * c * osc_v);
}

double BoundedPotentialBounds::psi_inv_bound(double s, double r) const {
  const double sigma = c * (2.0 / r - 1.0);
  return moment_product_bound(r, s) * std::exp(sigma * osc_v);
}

double BoundedPotentialBounds::dlsi_defect() const {
  return 2.0 * c * (4.0 + kLog3) * osc_v;
}

double BoundedPotentialBounds::wang_threshold() const {
  return std::log(2.0) / (2.0 * c * (4.0 + kLog3));
}

double BoundedPotentialBounds::dhs_c1(double osc_f) const {
  return c * std::exp(2.0 * osc_f);
}

double BoundedPotentialBounds::federbush_lower(double norm_e_negv_2c) {
  if (!(norm_e_negv_2c > 0.0))
    throw DomainError("federbush_lower: norm must be positive");
  return -std::log(norm_e_negv_2c);
}

BoundedPotentialBounds bounded_potential_bounds(double c, double osc_v) {
  if (!(c > 0.0)) throw DomainError("bounded_potential_bounds: c must be > 0");
  if (!(osc_v >= 0.0)) throw DomainError("bounded_potential_bounds: osc_v must be >= 0");
  return {c, osc_v};
}

double tensorize_lsi(std::span<const double> c_components) {
  if (c_components.empty()) throw DomainError("tensorize_lsi: empty component list");
  double worst = 0.0;
  for (double ci : c_components) {
    if (!(ci > 0.0)) throw DomainError("tensorize_lsi: components must be positive");
    worst = std::max(worst, ci);
  }
  return worst;
}

}  // namespace hypercon
