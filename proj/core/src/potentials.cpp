#include "hypercon/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hypercon {

namespace {
const double kSqrtPi = std::sqrt(std::acos(-1.0));
}

ScalarFn gaussian_density(double omega) {
  if (!(omega > 0.0)) throw DomainError("gaussian_density: omega must be > 0");
  const double norm = std::sqrt(omega) / kSqrtPi;
  return [omega, norm](double x) { return norm * std::exp(-omega * x * x); };
}

ScalarFn constant_density(double value) {
  if (!(value > 0.0)) throw DomainError("constant_density: value must be > 0");
  return [value](double) { return value; };
}

ScalarFn harmonic_potential(double a) {
  return [a](double x) { return a * x * x; };
}

ScalarFn quartic_potential(double lambda) {
  return [lambda](double x) { return lambda * x * x * x * x; };
}

ScalarFn power_potential(double lambda, double r) {
  if (!(lambda > 0.0) || !(r > 0.0))
    throw DomainError("power_potential: lambda, r must be > 0");
  return [lambda, r](double x) { return lambda * std::pow(std::abs(x), 2.0 * r); };
}

ScalarFn polynomial_potential(std::vector<double> even_coeffs) {
  if (even_coeffs.empty()) throw DomainError("polynomial_potential: no coefficients");
  return [c = std::move(even_coeffs)](double x) {
    const double x2 = x * x;
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x2 + *it;
    return acc;
  };
}

namespace {

// Even quartic q(x) = A + B x^2 + C x^4 matching V, V', V'' of e^{2c|x|}
// at |x| = 1.
struct ExpBlend {
  double A, B, C;
  explicit ExpBlend(double c) {
    const double v = std::exp(2.0 * c);
    C = (4.0 * c * c - 2.0 * c) * v / 8.0;
    B = c * v - 2.0 * C;
    A = v - B - C;
  }
};

}  // namespace

ScalarFn exp_growth_potential(double c) {
  if (!(c > 0.0)) throw DomainError("exp_growth_potential: c must be > 0");
  const ExpBlend q(c);
  return [c, q](double x) {
    const double ax = std::abs(x);
    if (ax >= 1.0) return std::exp(2.0 * c * ax);
    const double x2 = x * x;
    return q.A + q.B * x2 + q.C * x2 * x2;
  };
}

ScalarFn exp_growth_potential_derivative(double c) {
  const ExpBlend q(c);
  return [c, q](double x) {
    const double ax = std::abs(x);
    const double sign = x >= 0.0 ? 1.0 : -1.0;
    if (ax >= 1.0) return sign * 2.0 * c * std::exp(2.0 * c * ax);
    return 2.0 * q.B * x + 4.0 * q.C * x * x * x;
  };
}

ScalarFn super_potential(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("super_potential: alpha must be > 0");
  return [alpha](double x) { return std::exp(2.0 * alpha * x * x); };
}

ScalarFn slow_growth_potential(double b) {
  if (!(b > 0.0)) throw DomainError("slow_growth_potential: b must be > 0");
  return [b](double x) {
    const double v = std::pow(std::log(3.0 + std::abs(x)), b);
    return x * x * v * v;
  };
}

ScalarFn slow_growth_potential_derivative(double b) {
  return [b](double x) {
    const double ax = std::abs(x);
    const double sign = x >= 0.0 ? 1.0 : -1.0;
    const double L = std::log(3.0 + ax);
    const double v = std::pow(L, b);
    // d/dx [x^2 v^2] with v = log(3+|x|)^b
    return sign * (2.0 * ax * v * v +
                   x * x * 2.0 * v * b * std::pow(L, b - 1.0) / (3.0 + ax));
  };
}

ScalarFn load_tabulated(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw DomainError("load_tabulated: cannot open " + csv_path);
  std::vector<double> xs, ys;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, y;
    if (ss >> x >> y) {
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  if (xs.size() < 2) throw DomainError("load_tabulated: need at least 2 rows");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw DomainError("load_tabulated: x column must be strictly increasing");
  return [xs = std::move(xs), ys = std::move(ys)](double x) {
    if (x < xs.front() || x > xs.back())
      throw DomainError("tabulated function evaluated outside its range");
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = std::min<std::size_t>(it - xs.begin(), xs.size() - 1);
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return (1.0 - t) * ys[lo] + t * ys[hi];
  };
}

}  // namespace hypercon
