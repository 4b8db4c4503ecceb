#pragma once

// The change of gauge that makes the x0-direction metric coefficient
// constant: y(x0) = (2pi/v) * integral of V, resampling of Q on the uniform
// y grid, the limit predicted by the conserved integrals, and convergence
// reporting against it.

#include <vector>

#include "hsflow/deriv.hpp"
#include "hsflow/grid.hpp"

namespace hsflow {

struct GaugeMap {
    ScalarField y_of_x;  // strictly increasing, y(0) = 0, total increment 2pi
    double v = 0;        // integral of V

    // monotone cubic interpolant of x0 as a function of y (knots cover one
    // full period plus the wrap point)
    std::vector<double> knot_y, knot_x, slope;

    double inverse_at(double y) const;
};

GaugeMap build_gauge(const ScalarField& v_field);

// Qhat(y_j) = Q(x(y_j)) on the uniform grid with m nodes, via the inverse
// map and trigonometric interpolation; re-asserts det Qhat = 1 to 1e-10.
SymMat3Field resample_hat(const SymMat3Field& q, const GaugeMap& gauge, int m);

struct LimitPrediction {
    double v_inf = 0;
    SymMat3 qhat_inf;  // det = 1, positive definite
};

// The unique (v_inf, Qhat_inf) consistent with conservation of the
// component integrals and det Qhat_inf = 1:
//   Abar = (1/2pi) integral of sym(alpha0),
//   v_inf = 2pi (det Abar)^{1/3},  Qhat_inf = Abar / (det Abar)^{1/3}.
LimitPrediction limit_prediction(const Mat3Field& alpha0);

struct ConvergenceReport {
    double dist_inf = 0;     // max entry |Qhat - Qhat_inf| over nodes
    double q_prime_inf = 0;  // max entry |dQhat/dy|
    double v_gap = 0;        // |v - v_inf|
};

ConvergenceReport convergence_report(const SymMat3Field& qhat,
                                     const LimitPrediction& pred, double v);

}  // namespace hsflow
