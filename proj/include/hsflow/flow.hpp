#pragma once

// Time integration of the reduced flow  d(alpha)/dt = (V^{-1}(alpha/V)')'
// on the periodic grid.  Only the symmetric part of alpha evolves (the
// right-hand side is symmetric), so the state stores beta and the constant
// skew vector field separately; this makes skew preservation exact at the
// bit level rather than up to rounding.  A redundant (Q,V) co-evolution
// scheme is provided for cross-validation.

#include <limits>
#include <vector>

#include "hsflow/diagnostics.hpp"
#include "hsflow/grid.hpp"
#include "hsflow/kernels.hpp"

namespace hsflow {

struct FlowConfig {
    int n = 128;
    Scheme scheme = Scheme::spectral;
    double cfl_safety = 0.25;
    double dt_max = std::numeric_limits<double>::infinity();
    double t_end = 50.0;
    double stop_tol = 1e-10;      // convergence threshold on ||Q'||_inf
    double output_every = 0.1;
    bool renormalize_q = false;   // (Q,V) scheme only

    void validate() const;
};

struct FlowState {
    double t = 0;
    SymMat3Field beta;
    Vec3Field gamma;

    const CircleGrid& grid() const { return beta.grid; }
    Mat3Field alpha() const { return assemble(beta, gamma); }

    static FlowState from_alpha(const Mat3Field& a, double t = 0);
};

// (V^{-1} Q')' with Q = V^{-1} sym(alpha), V = (det sym(alpha))^{1/3}.
// Symmetric by construction; depends on beta only.
SymMat3Field rhs_conservative(const FlowState& s, Scheme scheme = Scheme::spectral);

// The same right-hand side with all derivatives expanded, evaluated through
// the symmetric-space inner product.  Stated for symmetric alpha: throws
// ConstraintViolated when the skew part exceeds 1e-12.
SymMat3Field rhs_expanded(const FlowState& s, Scheme scheme = Scheme::spectral);

// Pointwise core of the expanded form (shared with the linearization).
SymMat3 expanded_rhs_point(const SymMat3& a, const SymMat3& a1, const SymMat3& a2);

// Explicit step budget for the principal part (1/V^2) d^2/dx0^2:
// min(dt_max, cfl * h^2 * min(V)^2 / 2).
double stable_dt(const FlowState& s, const FlowConfig& cfg);

// One classical RK4 step; gamma is carried over verbatim.
FlowState advance(const FlowState& s, double dt, Scheme scheme = Scheme::spectral);

struct RunResult {
    std::vector<FlowState> snapshots;
    std::vector<DiagnosticsRecord> records;
    bool converged = false;
    double t_final = 0;
};

// Integrates until t_end or until ||Q'||_inf < stop_tol at a record time,
// emitting snapshots and diagnostics at cadence output_every.
RunResult run(const FlowConfig& cfg, const Mat3Field& alpha0);

// Redundant co-evolution of (Q, V):  dQ/dt = Lap Q - (1/3) T Q,
// dV/dt = (1/3) T V.  One RK4 step; optionally renormalizes det Q after.
struct QVState {
    double t = 0;
    SymMat3Field q;
    ScalarField v;
};
QVState evolve_qv_step(const QVState& s, double dt, bool renormalize,
                       Scheme scheme = Scheme::spectral);

}  // namespace hsflow
