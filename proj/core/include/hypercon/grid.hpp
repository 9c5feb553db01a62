#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hypercon/errors.hpp"

namespace hypercon {

/// Uniform 1-D grid with n nodes including both endpoints.
struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n = 0;
  double h = 0.0;
  std::vector<double> nodes;

  static Grid uniform(double x_min, double x_max, int n);
};

/// Discrete stand-in for dm = rho^2 dx: node densities and trapezoid
/// quadrature weights w_i = rho^2(x_i) h, halved at the two endpoints.
struct WeightedGridMeasure {
  Grid grid;
  std::vector<double> density;
  std::vector<double> weights;
  double total_mass = 0.0;
  bool probability = false;

  int size() const { return grid.n; }
};

std::vector<double> sample(const Grid&, const std::function<double(double)>&);

WeightedGridMeasure build_measure(const Grid&,
                                  const std::function<double(double)>& density_fn,
                                  bool normalize);
WeightedGridMeasure build_measure(const Grid&, std::vector<double> density,
                                  bool normalize);

double integrate(const WeightedGridMeasure&, std::span<const double> f);

/// (sum |f|^p w)^(1/p); defined for every p > 0, with no norm-axioms claim
/// for p < 1.
double lp_norm(const WeightedGridMeasure&, std::span<const double> f, double p);

/// Ent_m(f) = int f log f dm - (int f dm) log(int f dm), with 0 log 0 = 0.
double entropy(const WeightedGridMeasure&, std::span<const double> f);

/// log int e^g dm via a max shift; safe for arbitrarily large |g|.
double log_integrate_exp(const WeightedGridMeasure&, std::span<const double> g);

/// log ||e^g||_p = (1/p) log int e^{p g} dm.  p = +inf gives max g.
double log_lp_norm_exp(const WeightedGridMeasure&, std::span<const double> g, double p);

/// Centered differences at interior nodes, one-sided at the two ends.
std::vector<double> gradient(const Grid&, std::span<const double> f);

/// Fraction of total mass carried by nodes within `margin` of either endpoint;
/// the tail-mass diagnostic for domain-truncation quality.
double boundary_tail_mass(const WeightedGridMeasure&, double margin = 1.0);

}  // namespace hypercon
