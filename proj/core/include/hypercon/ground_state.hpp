#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypercon/constants.hpp"
#include "hypercon/eigensolver.hpp"
#include "hypercon/report.hpp"

namespace hypercon {

/// Ground state measure m_psi = psi^2 m with F = -log psi and its discrete
/// gradient; the input to every perturbation-bound check.
struct GroundStateMeasure {
  WeightedGridMeasure base;        // m
  GroundState state;               // psi, lambda0, gap of the base operator
  WeightedGridMeasure psi_measure; // m_psi
  std::vector<double> F;
  std::vector<double> gradF;
};

/// A fully solved verification instance: measure, potential, parameters and
/// the log-space norms every bound is built from.
struct Instance {
  std::string name;
  LsiParams params;
  WeightedGridMeasure m;
  std::vector<double> V;
  GroundStateMeasure gsm;
  double log_norm_evl_kappa = 0.0;  // log ||e^{V - lambda0}||_kappa
  double log_norm_elv_nu = 0.0;     // log ||e^{lambda0 - V}||_nu
  double log_M = 0.0;
  double M = 1.0;

  double lambda0() const { return gsm.state.lambda0; }
};

struct DistributionStats {
  double eps = 0.0, K = 0.0;
  double A_eps = 0.0;  // m(psi <= eps)
  double B_eps = 0.0;  // int_{psi <= eps} |grad F|^2 dm, boundary nodes excluded
  double C_K = 0.0;    // int_{psi > K} psi^2 dm
};

struct Lambda0Certificate {
  double lambda0 = 0.0;
  double federbush_lower = 0.0;  // -log ||e^{-V}||_nu
  double aida_upper = 0.0;       // log ||e^{V}||_kappa
  double mean_upper = 0.0;       // int V dm
  double log_norm_evl_kappa = 0.0;
  double log_norm_elv_nu = 0.0;
  double M = 1.0;
  double product_residual = 0.0;  // |log norms sum - log M|
  bool sandwich_ok = false;
  bool product_ok = false;
};

struct WkbResidual {
  double l2_m = 0.0;            // m-weighted RMS residual over interior nodes
  double linf_interior = 0.0;   // pointwise max over interior nodes
  double linf_bulk = 0.0;       // pointwise max where density >= 1e-3 * peak
};

struct AidaGapEstimate {
  double gamma1 = 0.0;
  double eps = 0.0;
  double K = 0.0;
  double log_R = 0.0;
  bool feasible = false;
  std::string diagnostics;
};

struct ConsecutiveTransformResult {
  double sup_psi_diff = 0.0;
  double lambda_residual = 0.0;
  double lambda = 0.0, lambda1 = 0.0, lambda2 = 0.0;
};

GroundStateMeasure transform(const WeightedGridMeasure& m, std::span<const double> V);

Instance make_instance(std::string name, const LsiParams&, WeightedGridMeasure m,
                       std::vector<double> V);

/// Worst relative mismatch of <(H - lambda0)(u psi), u psi>_m against the
/// m_psi Dirichlet energy over a battery of smooth test functions.
double intertwining_residual(const Instance&);

/// Residual of the discrete eikonal identity grad*grad F + |grad F|^2 = V - lambda0.
WkbResidual wkb_residual(const GroundStateMeasure&, std::span<const double> V);

/// grad*grad F + |grad F|^2 on a measure; the potential whose ground state
/// is e^{-F} (up to normalization).
std::vector<double> wkb_potential(const WeightedGridMeasure&, std::span<const double> F);

/// |int (v'(F) + v(F)) |grad F|^2 dm - int v(F)(V - lambda0) dm| for a
/// bounded C^1 weight v.
double aida_identity_residual(const GroundStateMeasure&, std::span<const double> V,
                              const std::function<double(double)>& v,
                              const std::function<double(double)>& v_prime);

/// One-sided level-set inequality int_{F>=a}|grad F|^2 dm <= int_{F>=a}(V-lambda0) dm.
CheckRecord aida_halfline_check(const Instance&, double level);

Lambda0Certificate lambda0_certificate(const Instance&, double rel_tol = 1e-6);

CheckRecord moment_product_check(const Instance&, double r, double s);
CheckRecord local_moment_product_check(const Instance&, double r, double s,
                                       double delta);
std::vector<CheckRecord> psi_inverse_bound_check(const Instance&, double s);

DistributionStats distribution_stats(const GroundStateMeasure&, double eps, double K);
std::vector<CheckRecord> distribution_bound_checks(const Instance&, double eps,
                                                   double K);

/// Defective-LSI check on m_psi for a battery of test functions; verifies
/// Ent(u^2) <= 2a E(u) + defect ||u||^2 with the defect taken both from the
/// measured ||psi^{-1}||_s route and from the M-power route.
std::vector<CheckRecord> dlsi_check(const Instance&, double a, double sigma,
                                    const std::vector<std::vector<double>>& test_fns);

ConsecutiveTransformResult consecutive_transform_check(const WeightedGridMeasure& m,
                                                       std::span<const double> V1,
                                                       std::span<const double> V2);

/// Spectral-gap certificate for m_psi from the distribution of psi: picks the
/// truncation radius from the defect, then searches (K, eps) until the
/// smallness condition holds, and returns gamma1 = B + 8 gamma (K/eps)^2.
AidaGapEstimate aida_gap_estimate(const GroundStateMeasure&, double gamma, double B,
                                  double D);

/// Ent_{m_psi}(u^2) - Ent_m((u psi)^2) - int (u psi)^2 2F dm, which vanishes
/// identically; exposed as a consistency diagnostic.
double entropy_split_residual(const GroundStateMeasure&, std::span<const double> u);

/// Default smooth test battery on a grid (polynomials, waves, soft bumps).
std::vector<std::vector<double>> default_test_functions(const Grid&, int count = 10);

}  // namespace hypercon
