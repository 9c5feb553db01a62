#include "hypercon/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypercon {

Grid Grid::uniform(double x_min, double x_max, int n) {
  if (!(x_min < x_max)) throw DomainError("Grid: x_min must be < x_max");
  if (n < 3) throw DomainError("Grid: need at least 3 nodes");
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n = n;
  g.h = (x_max - x_min) / (n - 1);
  g.nodes.resize(n);
  for (int i = 0; i < n; ++i) g.nodes[i] = x_min + i * g.h;
  g.nodes.back() = x_max;
  return g;
}

std::vector<double> sample(const Grid& g, const std::function<double(double)>& f) {
  std::vector<double> out(g.n);
  for (int i = 0; i < g.n; ++i) out[i] = f(g.nodes[i]);
  return out;
}

WeightedGridMeasure build_measure(const Grid& g, std::vector<double> density,
                                  bool normalize) {
  if (static_cast<int>(density.size()) != g.n)
    throw DomainError("build_measure: density size mismatch");
  WeightedGridMeasure m;
  m.grid = g;
  bool any_positive = false;
  for (double d : density) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw DegenerateMeasure("build_measure: density must be finite and >= 0");
    any_positive |= d > 0.0;
  }
  if (!any_positive) throw DegenerateMeasure("build_measure: density vanishes everywhere");
  m.density = std::move(density);
  m.weights.resize(g.n);
  for (int i = 0; i < g.n; ++i) m.weights[i] = m.density[i] * g.h;
  m.weights.front() *= 0.5;
  m.weights.back() *= 0.5;
  double mass = 0.0;
  for (double w : m.weights) mass += w;
  if (normalize) {
    for (int i = 0; i < g.n; ++i) {
      m.weights[i] /= mass;
      m.density[i] /= mass;
    }
    m.total_mass = 1.0;
    m.probability = true;
  } else {
    m.total_mass = mass;
  }
  return m;
}

WeightedGridMeasure build_measure(const Grid& g,
                                  const std::function<double(double)>& density_fn,
                                  bool normalize) {
  return build_measure(g, sample(g, density_fn), normalize);
}

double integrate(const WeightedGridMeasure& m, std::span<const double> f) {
  if (f.size() != m.weights.size()) throw DomainError("integrate: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * m.weights[i];
  return acc;
}

double lp_norm(const WeightedGridMeasure& m, std::span<const double> f, double p) {
  if (!(p > 0.0)) throw DomainError("lp_norm: p must be > 0");
  if (f.size() != m.weights.size()) throw DomainError("lp_norm: size mismatch");
  if (std::isinf(p)) {
    double sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (m.weights[i] > 0.0) sup = std::max(sup, std::abs(f[i]));
    return sup;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += std::pow(std::abs(f[i]), p) * m.weights[i];
  return std::pow(acc, 1.0 / p);
}

double entropy(const WeightedGridMeasure& m, std::span<const double> f) {
  if (f.size() != m.weights.size()) throw DomainError("entropy: size mismatch");
  double mean = 0.0;
  double flogf = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] >= 0.0)) throw DomainError("entropy: f must be nonnegative");
    mean += f[i] * m.weights[i];
    if (f[i] > 0.0) flogf += f[i] * std::log(f[i]) * m.weights[i];
  }
  if (mean <= 0.0) return 0.0;
  return flogf - mean * std::log(mean);
}

double log_integrate_exp(const WeightedGridMeasure& m, std::span<const double> g) {
  if (g.size() != m.weights.size()) throw DomainError("log_integrate_exp: size mismatch");
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::isnan(g[i])) throw OverflowGuard("log_integrate_exp: NaN exponent");
    if (m.weights[i] > 0.0) peak = std::max(peak, g[i]);
  }
  if (std::isinf(peak) && peak > 0.0)
    throw OverflowGuard("log_integrate_exp: exponent is +inf on the grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (m.weights[i] > 0.0) acc += std::exp(g[i] - peak) * m.weights[i];
  return peak + std::log(acc);
}

double log_lp_norm_exp(const WeightedGridMeasure& m, std::span<const double> g, double p) {
  if (!(p > 0.0)) throw DomainError("log_lp_norm_exp: p must be > 0");
  if (std::isinf(p)) {
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i)
      if (m.weights[i] > 0.0) sup = std::max(sup, g[i]);
    return sup;
  }
  std::vector<double> scaled(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) scaled[i] = p * g[i];
  return log_integrate_exp(m, scaled) / p;
}

std::vector<double> gradient(const Grid& g, std::span<const double> f) {
  if (static_cast<int>(f.size()) != g.n) throw DomainError("gradient: size mismatch");
  std::vector<double> d(g.n);
  const double h = g.h;
  d[0] = (f[1] - f[0]) / h;
  for (int i = 1; i < g.n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[g.n - 1] = (f[g.n - 1] - f[g.n - 2]) / h;
  return d;
}

double boundary_tail_mass(const WeightedGridMeasure& m, double margin) {
  double tail = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    const double x = m.grid.nodes[i];
    if (x < m.grid.x_min + margin || x > m.grid.x_max - margin) tail += m.weights[i];
  }
  return tail / m.total_mass;
}

}  // namespace hypercon
