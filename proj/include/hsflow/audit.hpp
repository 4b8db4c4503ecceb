#pragma once

// Numerical verification of the quantitative statements the flow obeys:
// per-record monitors, the Riccati decay envelope for the torsion maximum,
// the heat-type identity satisfied by the scalar torsion, curvature of the
// gauge-normalized metric, and the linearized operator with its symbol.

#include <span>
#include <utility>
#include <vector>

#include "hsflow/diagnostics.hpp"
#include "hsflow/flow.hpp"
#include "hsflow/grid.hpp"

namespace hsflow {

// Fills a DiagnosticsRecord from the current state and the t=0 data.
DiagnosticsRecord audit(const FlowState& s, const Mat3Field& alpha0,
                        Scheme scheme = Scheme::spectral);

// Torsion maxima against the barrier envelope T(0)/(1 + T(0) t / 3).
// ok iff every sample satisfies T(t) <= envelope * (1+1e-6) + 1e-8;
// worst_margin is the largest violation (negative when all pass).
struct RiccatiReport {
    bool ok = true;
    double worst_margin = 0;
};
RiccatiReport riccati_check(std::span<const std::pair<double, double>> series);

// Residual of the torsion evolution identity on three equally spaced
// snapshots: (centered dT/dt - Lap T) - RHS, evaluated at cur.
ScalarField torsion_heat_residual(const FlowState& prev, const FlowState& cur,
                                  const FlowState& next,
                                  Scheme scheme = Scheme::spectral);

// Curvature components of (v/2pi)^2 dy^2 + Qhat_ij dx_i dx_j on the uniform
// y grid.  r_yiyj(i,j) = R_yiy^j;  r_ijkl channel ((i*3+j)*3+k)*3+l = R_ijk^l;
// r_yijk is identically zero and returned zeroed for completeness.
struct Rank3Field {
    CircleGrid grid;
    std::vector<double> c;  // 27 channels, layout ch * n + node

    Rank3Field() = default;
    explicit Rank3Field(const CircleGrid& g) : grid(g), c(27 * g.n, 0.0) {}
    double at(int node, int i, int j, int k) const {
        return c[((i * 3 + j) * 3 + k) * grid.n + node];
    }
    double max_abs() const;
};

struct Rank4Field {
    CircleGrid grid;
    std::vector<double> c;  // 81 channels

    Rank4Field() = default;
    explicit Rank4Field(const CircleGrid& g) : grid(g), c(81 * g.n, 0.0) {}
    double& slot(int node, int i, int j, int k, int l) {
        return c[(((i * 3 + j) * 3 + k) * 3 + l) * grid.n + node];
    }
    double at(int node, int i, int j, int k, int l) const {
        return c[(((i * 3 + j) * 3 + k) * 3 + l) * grid.n + node];
    }
    double max_abs() const;
};

struct CurvatureHat {
    Mat3Field r_yiyj;
    Rank4Field r_ijkl;
    Rank3Field r_yijk;

    double max_abs() const;
};

CurvatureHat curvature_hat(const SymMat3Field& qhat, double v,
                           Scheme scheme = Scheme::spectral);

// Derivative of the expanded flow operator at alpha in direction beta
// (all terms, including the variation of the inner product and of V).
SymMat3Field linearize(const SymMat3Field& alpha, const SymMat3Field& beta,
                       Scheme scheme = Scheme::spectral);

// Principal symbol of the linearized operator in direction xi:
// (xi^2 / V^2) (beta - (1/3) <alpha,beta>_alpha alpha).  Annihilates alpha.
SymMat3 principal_symbol(const SymMat3& alpha, double xi, const SymMat3& beta);

// The audit pair A = Q^{-1/2} Q'' Q^{-1/2}, B = Q^{-1/2} Q' Q^{-1/2} at a
// node, for feeding the trace inequality along real runs.
std::pair<SymMat3, SymMat3> audit_pair(const SymMat3& q, const SymMat3& qp,
                                       const SymMat3& qpp);

}  // namespace hsflow
