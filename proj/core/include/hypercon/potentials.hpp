#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hypercon/errors.hpp"

namespace hypercon {

using ScalarFn = std::function<double(double)>;

// Densities (rho^2) ----------------------------------------------------------

/// (omega/pi)^{1/2} e^{-omega x^2}: the ground state measure of the
/// oscillator with stiffness omega^2.
ScalarFn gaussian_density(double omega);
ScalarFn constant_density(double value = 1.0);

// Potentials -----------------------------------------------------------------

ScalarFn harmonic_potential(double a);           // a x^2
ScalarFn quartic_potential(double lambda);       // lambda x^4
ScalarFn power_potential(double lambda, double r);  // lambda |x|^{2r}
ScalarFn polynomial_potential(std::vector<double> even_coeffs);  // sum c_j x^{2j}

/// e^{2c|x|} outside [-1,1] with an even quartic blend on [-1,1] matching
/// value, slope and curvature at +-1.
ScalarFn exp_growth_potential(double c);
ScalarFn exp_growth_potential_derivative(double c);

/// e^{2 alpha x^2} (the growth class that needs the second-order route).
ScalarFn super_potential(double alpha);

/// x^2 log(3+|x|)^{2b}: slow superquadratic growth.
ScalarFn slow_growth_potential(double b);
ScalarFn slow_growth_potential_derivative(double b);

// Tabulated ------------------------------------------------------------------

/// Piecewise-linear interpolant of a two-column (x, value) CSV file.
/// Throws DomainError when evaluated outside the tabulated range.
ScalarFn load_tabulated(const std::string& csv_path);

}  // namespace hypercon
