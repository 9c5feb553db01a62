#pragma once

#include <optional>
#include <string>

#include "hypercon/ground_state.hpp"
#include "hypercon/potentials.hpp"

namespace hypercon {

/// Even potential with derivative data for the intermediate-state builder.
/// d2V is only needed by the second-order route.
struct EckmannInput {
  ScalarFn V;
  ScalarFn dV;
  ScalarFn d2V;
  double x0 = 1.0;
  bool sign_split = false;  // one-sided slope conditions instead of even symmetry
};

struct EckmannConditions {
  double a = 0.0;  // min of (d/dx) sqrt(V) on the probe tail
  double k = 0.0;  // max of V'/V on the probe tail
  bool ok = false; // a > 0 and V'/V not growing toward the probe edge
  bool k_unbounded = false;
};

/// Slope and log-derivative scan over [x0, probe_max] (both tails under
/// sign_split).  Throws ConditionFailed with the witness when the slope
/// condition fails.
EckmannConditions check_eckmann_conditions(const EckmannInput&, double probe_max,
                                           int probe_points = 512);

/// Explicit log-concave reference state: quadratic core b x^2/2 inside |x| < x0
/// and the accumulated tail integral of sqrt(V) (plus the log-derivative
/// correction on the second-order route) outside, C^1 across the seam.
struct IntermediateState {
  double x0 = 0.0;
  double a = 0.0, k = 0.0, b = 0.0;
  double c_F = 0.0;  // Sobolev constant bound 1/(2 min(a,b))
  bool second_order = false;
  ScalarFn F;
  ScalarFn W;          // potential whose ground state is e^{-F}; branchwise
  ScalarFn V_minus_W;  // evaluated from the branch formulas, never by
                       // differencing F across the seam
  double f_jump = 0.0, fp_jump = 0.0;  // seam continuity probes
  double g2_ratio = 0.0, gp_ratio = 0.0;  // edge ratios, second order only
};

IntermediateState build_intermediate(const EckmannInput&);
IntermediateState build_second_order(const EckmannInput&, double probe_max = 0.0);

/// Smallest x0 from the candidate ladder for which the slope bound holds
/// with a 10% margin.
double scan_x0(const EckmannInput&, double probe_max, double x0_min = 0.25,
               double x0_max = 4.0);

struct EckmannReport {
  std::string name;
  double x0 = 0.0, a = 0.0, k = 0.0, b = 0.0, c_F = 0.0;
  bool second_order = false;
  double f_jump = 0.0, fp_jump = 0.0;
  double g2_ratio = 0.0, gp_ratio = 0.0;
  double wkb_closure_sup = 0.0;  // ground state of W vs e^{-F}/Z, sup norm
  std::vector<CheckRecord> finiteness;
  std::vector<CheckRecord> battery;
  double lambda0 = 0.0, gap = 0.0;  // relative instance
  double final_gap = 0.0;           // gap of the m_psi Dirichlet operator
  double log_c1_bound = 0.0;
  double log_gamma1_bound = 0.0;
  bool gap_ok = false;
  bool ok = false;

  nlohmann::ordered_json to_json() const;
};

/// Finiteness ladder, relative solve on m^F with V - W, full bound battery
/// and the assembled spectral-gap comparison.
EckmannReport perturbation_step(const IntermediateState&, const ScalarFn& V,
                                double kappa, double nu, double L, int n,
                                const std::string& name);

/// Named example pipelines (the CLI's example library).
EckmannReport run_eckmann_example(const std::string& name, double param1 = 0.0,
                                  double param2 = 0.0);

struct MalrieuRobertoReport {
  double beta = 0.0;
  double c = 0.0, kappa = 0.0, nu = 0.0;
  bool envelope_ok = false;       // 0 <= U <= x^2 (2+|beta|)^2 on the grid
  double nonconvexity_x = 0.0;    // witness with F'' < -1
  double nonconvexity_value = 0.0;
  ConsecutiveTransformResult split;
  std::vector<CheckRecord> finiteness;
  std::vector<CheckRecord> battery;
  double final_gap = 0.0;
  double log_c1_bound = 0.0;
  bool gap_ok = false;
  bool ok = false;

  nlohmann::ordered_json to_json() const;
};

MalrieuRobertoReport malrieu_roberto(double beta, double L = 7.0, int n = 2801);

struct ToyModelReport {
  int dimension = 0;
  double lambda = 0.0, a_norm = 0.0;
  double factor_c1_log = 0.0;  // 1-D quartic factor constant, log space
  double tensor_c = 0.0;       // per-factor Sobolev coefficient after tensorization
  std::vector<CheckRecord> admissibility;  // e^{alpha b x^2} widening ladder
  EckmannReport factor;
  bool ok = false;

  nlohmann::ordered_json to_json() const;
};

ToyModelReport toy_model_constants(int dimension, double lambda, double a_norm);

}  // namespace hypercon
