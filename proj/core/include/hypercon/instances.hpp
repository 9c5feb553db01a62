#pragma once

#include "hypercon/ground_state.hpp"

namespace hypercon {

/// Sampled log-ground-state profile built from explicit branches, with the
/// potential it solves via the eikonal identity.
struct TiltProfile {
  std::vector<double> F;
  std::vector<double> V;
  double osc_v = 0.0;
};

/// Gaussian base measure m_omega with the quadratic perturbation a x^2; the
/// exactly solvable sharpness instance (lambda0 = sqrt(omega^2+a) - omega).
Instance make_gaussian_quadratic(double omega = 1.0, double a = 3.0, double L = 8.0,
                                 int n = 4001, double kappa = 0.2, double nu = 2.0);

/// Bounded potential over the Gaussian base whose ground state grows
/// polynomially on one side and decays on the other (psi and 1/psi both
/// unbounded): branches (1+x^2)^{+-1} joined by an odd quintic on [-1,1].
TiltProfile bounded_tilt_profile(const Grid&);
Instance make_bounded_tilt(double L = 8.0, int n = 3201, double kappa = 1.0,
                           double nu = 2.0);

/// Relative instance of the quartic pipeline: intermediate measure e^{-2F}
/// for V = x^4 (matching point x0 = 1) with the residual potential V - W.
Instance make_quartic_relative(double L = 6.0, int n = 3001, double kappa = 0.45,
                               double nu = 4.0);

/// Relative instance of the x^2 + beta x sin x density split over its
/// Gaussian factor.
Instance make_malrieu_roberto_relative(double beta = 1.0, double L = 7.0,
                                       int n = 2801, double kappa = 0.05,
                                       double nu = 3.0);

/// Small bounded ripple potential on the Gaussian base; oscillation below
/// the small-defect spectral-gap threshold.
Instance make_cosine_ripple(double amplitude = 0.06, double L = 8.0, int n = 1601,
                            double kappa = 1.0, double nu = 2.0);

/// The four instances every identity and bound check runs on.
std::vector<Instance> standard_battery();

}  // namespace hypercon
