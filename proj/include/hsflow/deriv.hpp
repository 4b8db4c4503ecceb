#pragma once

// Discrete calculus on the periodic grid: derivatives (spectral by default,
// 4th-order centered differences as the robust alternative), the rectangle
// rule, trigonometric/cubic interpolation, and the periodic antiderivative.

#include <span>
#include <vector>

#include "hsflow/grid.hpp"

namespace hsflow {

enum class Scheme { spectral, fd4 };

enum class InterpKind { trig, cubic };

// order in {1,2}.  Spectral mode zeroes the Nyquist mode of the first
// derivative (n is even); fd4 uses the standard 5-point periodic stencils.
void deriv_inplace(std::span<const double> in, std::span<double> out,
                   const CircleGrid& grid, int order, Scheme scheme);

ScalarField deriv(const ScalarField& f, int order, Scheme scheme = Scheme::spectral);
SymMat3Field deriv(const SymMat3Field& f, int order, Scheme scheme = Scheme::spectral);
Mat3Field deriv(const Mat3Field& f, int order, Scheme scheme = Scheme::spectral);

// h * sum(samples): spectrally exact for smooth periodic integrands.
double integrate(const ScalarField& f);
SymMat3 integrate(const SymMat3Field& f);
Mat3 integrate(const Mat3Field& f);

// Values of the interpolant at arbitrary points (reduced mod 2pi).
std::vector<double> interpolate(const ScalarField& f, std::span<const double> targets,
                                InterpKind kind = InterpKind::trig);

// F with F' = f and F(0) = 0; the mean of f contributes the linear part.
ScalarField antiderivative(const ScalarField& f);

// 2/3-rule spectral filter (stress-testing aid; the flow does not use it).
ScalarField dealias_23(const ScalarField& f);

}  // namespace hsflow
