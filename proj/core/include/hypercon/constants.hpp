#pragma once

#include <optional>
#include <span>

#include "hypercon/errors.hpp"

namespace hypercon {

/// Hypothesis triple for the perturbation estimates: a logarithmic Sobolev
/// coefficient c for the base measure, and integrability exponents kappa
/// (for e^V) and nu (for e^{-V}).  kappa and nu may be +infinity; the
/// degenerate limits are handled by explicit branches.
struct LsiParams {
  double c;
  double kappa;
  double nu;
};

/// Roots of p^2 - (2 nu / c)(p - 1) = 0, the interval (q0, p0) of Lebesgue
/// indices on which the non-standard hyperbounds hold.
struct IntervalRoots {
  double q0;
  double p0;
  double a_nu;  // sqrt(1 - 2c/nu)
};

/// Roots of t^2 - (2 kappa / c)(t + 1) = 0: s0 > 0 bounds the inverse-moment
/// index, r0 in (0,1) the direct-moment index.
struct MomentRoots {
  double s0;
  double r0;
  double b_kappa;  // sqrt(1 + 2c/kappa)
};

/// Constant chain behind the quantitative Poincare bound gamma_1 <= d1 M^e1
/// and the assembled main-theorem constants.  Exponents routinely exceed
/// what double can hold in linear space, so every overflow-prone quantity is
/// carried in log space alongside its (possibly infinite) linear value.
struct GapConstants {
  double a;       // = sigma = 2 c_nu b_kappa, the DLSI parameter choice
  double sigma;
  double s1;      // (b_kappa - 1/2)^{-1}
  double alpha1;  // a + c log 3 / b_kappa
  double beta1, beta2, beta3, beta4, beta5;
  double d1, e1;
  double defect;            // D = 2 (2a + c log3/b_kappa) log M
  double log_R;             // log R = 6 (D + 1/e)
  double log_K2, log_eps2;  // region thresholds K^2, eps^2 in log space
  double K2, eps2;          // linear space; may overflow/underflow
  double gamma1_bound;      // d1 M^{e1}, may be +inf
  double log_gamma1_bound;
};

struct MainTheoremConstants {
  double c1_bound;  // a + gamma1 (1 + log M^{2a + c log3/b_kappa})
  double log_c1_bound;
  double alpha;  // a + d1
  double beta;   // e1 + 2a + c log3/b_kappa
  double gap_bound;  // max(1/c1_bound, 1/(d1 M^{e1}))
  double log_gap_bound;
  GapConstants gap;
};

/// Specializations available when V is bounded with oscillation osc_v
/// (kappa and nu both infinite).
struct BoundedPotentialBounds {
  double c;
  double osc_v;

  double psi_p_bound(double p) const;       // (p-1)^{(c/2) osc}, p >= 2
  double psi_r_lower(double r) const;       // e^{-sigma osc}, 0 < r < 2
  double moment_product_bound(double r, double s) const;  // ((1+s)/(1-r))^{(c/2) osc}
  double psi_inv_bound(double s, double r = 0.5) const;
  double dlsi_coefficient() const { return 4.0 * c; }     // 2a with a = 2c
  double dlsi_defect() const;               // 2 c (4 + log 3) osc
  double wang_threshold() const;            // osc bound for a quantified gap
  double dhs_c1(double osc_f) const;        // c e^{2 osc_f} for weight e^{-2F}
  static double federbush_lower(double norm_e_negv_2c);
};

// Scalar building blocks.  All pure; infinite kappa/nu take limit values.
double a_nu(const LsiParams&);                 // sqrt(1 - 2c/nu)
double b_kappa(const LsiParams&);              // sqrt(1 + 2c/kappa)
double sobolev_coefficient(const LsiParams&);  // c_nu = c / (1 - 2c/nu)

IntervalRoots interval_roots(const LsiParams&);
double sobolev_coefficient_p(const LsiParams&, double p);  // nu p / ((p0-p)(p-q0))
double tau(const LsiParams&, double p);
double p_of_t(const LsiParams&, double t);

MomentRoots moment_roots(const LsiParams&);
double ell(const LsiParams&, double t);
double ell_prime(const LsiParams&, double t);
double ell_fixed_point(const LsiParams&);      // unique t with ell(t) = t
double ell_plus_t_minimizer(const LsiParams&); // sqrt((b c_nu)^2 + c c_nu)
double sigma_star(const LsiParams&, double s);

double moment_product_exponent(const LsiParams&, double r, double s);

double controlling_M(double norm_ev_kappa, double norm_e_negv_nu);
double dlsi_defect(const LsiParams&, double M, double a, double sigma);
std::optional<double> wang_gap(double C1, double C2);
double rothaus_tighten(double C, double C_prime, double D);

GapConstants aida_gap_constants(const LsiParams&, double M);
MainTheoremConstants main_theorem_constants(const LsiParams&, double M);

BoundedPotentialBounds bounded_potential_bounds(double c, double osc_v);

double tensorize_lsi(std::span<const double> c_components);

}  // namespace hypercon
