#pragma once

#include <functional>
#include <map>
#include <vector>

#include "hypercon/constants.hpp"
#include "hypercon/operators.hpp"
#include "hypercon/report.hpp"

namespace hypercon {

/// Implicit-midpoint propagation record of e^{-tH} f0 with L^p norm curves.
struct SemigroupRun {
  TridiagonalOperator op;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> states;          // at sample times
  std::map<double, std::vector<double>> norm_curves;  // p -> ||f(t)||_p
};

/// Second-order A-stable propagation; samples states and norms at
/// `n_samples` evenly spaced times (plus t = 0).
SemigroupRun propagate(const TridiagonalOperator&, std::span<const double> f0,
                       double t_end, double dt,
                       std::span<const double> norm_indices = {},
                       int n_samples = 16);

struct HyperboundednessProbe {
  double t = 0.0, q = 0.0, p = 0.0;
  double empirical_ratio = 0.0;  // max over trials of ||e^{-tH} f||_p / ||f||_q
  double bound = 0.0;            // ||e^{-V}||_nu^t
  bool ok = false;
};

/// Trial-maximum lower bound on the q->p operator norm against the
/// hyperboundedness bound; trials default to Hermite-like polynomials
/// times Gaussians.
HyperboundednessProbe hyperboundedness_probe(
    const WeightedGridMeasure&, std::span<const double> V, const LsiParams&,
    double q, double p, double t,
    const std::vector<std::vector<double>>& trials = {});

/// Quadratic-exponent Gaussian flow: s' = 4s^2 - 4s + a, b' = 2s.
struct GaussianFlow {
  double a = 0.0;
  std::vector<double> times, s, b;
  double t1 = 0.0;        // terminal time of the record
  bool hit_half = false;  // stopped early at s = 1/2 - 1e-9
  double max_ode_residual = 0.0;

  double s_at(double t) const;
  double b_at(double t) const;
};

GaussianFlow gaussian_flow(double a, double s_start, double t_end, double dt = 1e-4);

/// Loss-of-boundedness demonstration for negative quadratic potentials over
/// the Gaussian base (c = 1/2): builds a = 1/nu - eps, runs the flow through
/// s = 1/p1, and contrasts the finite initial L^{p1} norm with the divergent
/// one just past the crossing, plus the in-interval control at p = 4.
struct BlowupReport {
  double nu = 0.0, p1 = 0.0;
  double eps = 0.0, a = 0.0;
  double s_start = 0.0, s_cross = 0.0, s_probe = 0.0;
  double t_cross = 0.0, t_probe = 0.0;
  double f0_widen_factor = 0.0;       // I(2L)/I(L) - 1 for the initial state
  double enu_widen_factor = 0.0;      // same for int e^{-nu V} d gamma
  double divergence_factor = 0.0;     // I(2L)/I(L) for |f(t_probe)|^{p1}
  CheckRecord control;                // p = 4 bound at t = tau(4)
  bool ok = false;
};

BlowupReport blowup_experiment(double nu, double p1, double L = 8.0);

/// Log-moment curve u(t) = log ||e^g||_t with the entropy ratio
/// r(t) = Ent(e^{tg}) / (t^2 E(e^{tg})) and its consistency data.
struct HerbstCurve {
  std::vector<double> t, u, r, u_prime;
  double limit_at_zero = 0.0;  // two-sided limit estimate of u at 0
  double mean_g = 0.0;         // int g dm
  double max_identity_residual = 0.0;  // max |u'(t) - r(t)|
};

HerbstCurve herbst_curve(const WeightedGridMeasure&, std::span<const double> g,
                         std::span<const double> t_grid);

/// ||e^{-g}||_r ||e^{g}||_s against exp(int_{-r}^{s} beta), the envelope
/// integral evaluated by composite Simpson.
CheckRecord herbst_product_check(const WeightedGridMeasure&, std::span<const double> g,
                                 double r, double s,
                                 const std::function<double(double)>& beta,
                                 const std::string& instance = "");

}  // namespace hypercon
