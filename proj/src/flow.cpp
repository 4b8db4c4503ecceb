#include "hsflow/flow.hpp"

#include <cmath>

#include "hsflow/audit.hpp"
#include "hsflow/geometry.hpp"

namespace hsflow {

void FlowConfig::validate() const {
    if (cfl_safety <= 0 || cfl_safety > 1)
        throw ConstraintViolated("FlowConfig: cflSafety must be in (0,1]");
    if (t_end <= 0) throw ConstraintViolated("FlowConfig: tEnd must be positive");
    if (output_every <= 0)
        throw ConstraintViolated("FlowConfig: outputEvery must be positive");
    CircleGrid check(n);  // validates node count
    (void)check;
}

FlowState FlowState::from_alpha(const Mat3Field& a, double t) {
    FlowState s;
    s.t = t;
    s.beta = sym_part(a);
    s.gamma = skew_vec(a);
    return s;
}

SymMat3Field rhs_conservative(const FlowState& s, Scheme scheme) {
    return rhs_core(s.beta, scheme);
}

SymMat3 expanded_rhs_point(const SymMat3& a, const SymMat3& a1, const SymMat3& a2) {
    const SymMat3 ai = inverse_spd(a);
    const double v2 = std::cbrt(a.det() * a.det());
    const double p = mul(ai, a1).trace();                 // <a,a'>_a
    const double q = mul(ai, a2).trace();                 // <a,a''>_a
    const Mat3 m1 = mul(ai, a1);
    const double r = (m1 * m1).trace();                   // <a',a'>_a
    const double ca = -q / 3.0 + r / 3.0 + 2.0 * p * p / 9.0;
    return (a2 - a1 * p + a * ca) * (1.0 / v2);
}

SymMat3Field rhs_expanded(const FlowState& s, Scheme scheme) {
    if (s.gamma.max_abs() > 1e-12)
        throw ConstraintViolated("rhs_expanded: alpha must be symmetric");
    const SymMat3Field a1 = deriv(s.beta, 1, scheme);
    const SymMat3Field a2 = deriv(s.beta, 2, scheme);
    SymMat3Field out(s.grid());
    for (int k = 0; k < s.grid().n; ++k)
        out.set(k, expanded_rhs_point(s.beta.at(k), a1.at(k), a2.at(k)));
    return out;
}

double stable_dt(const FlowState& s, const FlowConfig& cfg) {
    const double vmin = v_field(s.beta).min();
    const double h = s.grid().h;
    return std::fmin(cfg.dt_max, cfg.cfl_safety * h * h * vmin * vmin / 2.0);
}

namespace {

SymMat3Field axpy(const SymMat3Field& b, const SymMat3Field& k, double c) {
    SymMat3Field r(b.grid);
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < b.grid.n; ++i) r.c[j][i] = b.c[j][i] + c * k.c[j][i];
    return r;
}

}  // namespace

FlowState advance(const FlowState& s, double dt, Scheme scheme) {
    const SymMat3Field k1 = rhs_core(s.beta, scheme);
    const SymMat3Field k2 = rhs_core(axpy(s.beta, k1, dt / 2), scheme);
    const SymMat3Field k3 = rhs_core(axpy(s.beta, k2, dt / 2), scheme);
    const SymMat3Field k4 = rhs_core(axpy(s.beta, k3, dt), scheme);

    FlowState out;
    out.t = s.t + dt;
    out.gamma = s.gamma;
    out.beta = SymMat3Field(s.grid());
    const double c = dt / 6.0;
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < s.grid().n; ++i)
            out.beta.c[j][i] = s.beta.c[j][i] +
                               c * (k1.c[j][i] + 2 * k2.c[j][i] + 2 * k3.c[j][i] +
                                    k4.c[j][i]);
    if (!out.beta.finite())
        throw UnstableStep("advance: non-finite state", out.t);
    return out;
}

RunResult run(const FlowConfig& cfg, const Mat3Field& alpha0) {
    cfg.validate();
    if (alpha0.grid.n != cfg.n)
        throw GridMismatch("run: initial data grid does not match config");
    const auto [ok, margin] = is_hypersymplectic(alpha0);
    if (!ok)
        throw NotPositiveDefinite("run: initial data is not hypersymplectic (margin " +
                                  std::to_string(margin) + ")");

    RunResult res;
    FlowState state = FlowState::from_alpha(alpha0);

    auto record = [&](const FlowState& s) {
        res.records.push_back(audit(s, alpha0, cfg.scheme));
        res.snapshots.push_back(s);
    };

    record(state);
    if (q_prime_max(state.beta, cfg.scheme) < cfg.stop_tol) {
        res.converged = true;
        res.t_final = state.t;
        return res;
    }

    int slot = 0;
    while (state.t < cfg.t_end - 1e-12) {
        ++slot;
        const double t_next = std::fmin(cfg.t_end, slot * cfg.output_every);
        while (t_next - state.t > 1e-12) {
            const double dt =
                std::fmin(stable_dt(state, cfg), t_next - state.t);
            state = advance(state, dt, cfg.scheme);
        }
        state.t = t_next;
        record(state);
        if (q_prime_max(state.beta, cfg.scheme) < cfg.stop_tol) {
            res.converged = true;
            break;
        }
    }
    res.t_final = state.t;
    return res;
}

namespace {

struct QVDot {
    SymMat3Field q;
    ScalarField v;
};

QVDot qv_rhs(const SymMat3Field& q, const ScalarField& v, Scheme scheme) {
    const int n = q.grid.n;
    const SymMat3Field qp = deriv(q, 1, scheme);
    ScalarField torsion(q.grid);
    for (int k = 0; k < n; ++k) {
        const Mat3 m = mul(inverse_sym(q.at(k)), qp.at(k));
        torsion.v[k] = (m * m).trace() / (v.v[k] * v.v[k]);
    }
    // Lap Q entrywise: V^{-1}(V^{-1} Q')'
    SymMat3Field t = qp;
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < n; ++k) t.c[j][k] /= v.v[k];
    SymMat3Field lap = deriv(t, 1, scheme);
    QVDot d;
    d.q = SymMat3Field(q.grid);
    d.v = ScalarField(q.grid);
    for (int k = 0; k < n; ++k) {
        const double tt = torsion.v[k];
        for (int j = 0; j < 6; ++j)
            d.q.c[j][k] = lap.c[j][k] / v.v[k] - tt / 3.0 * q.c[j][k];
        d.v.v[k] = tt / 3.0 * v.v[k];
    }
    return d;
}

}  // namespace

QVState evolve_qv_step(const QVState& s, double dt, bool renormalize, Scheme scheme) {
    require_same_grid(s.q.grid, s.v.grid);
    if (s.v.min() <= 0)
        throw NotPositiveDefinite("evolve_qv_step: V must be positive");
    for (int k = 0; k < s.q.grid.n; ++k)
        if (std::fabs(s.q.at(k).det() - 1.0) > 1e-6)
            throw ConstraintViolated("evolve_qv_step: det Q deviates from 1");

    auto step = [&](const SymMat3Field& q0, const ScalarField& v0, const QVDot& d,
                    double c) {
        SymMat3Field q1(q0.grid);
        ScalarField v1(q0.grid);
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < q0.grid.n; ++k)
                q1.c[j][k] = q0.c[j][k] + c * d.q.c[j][k];
        for (int k = 0; k < q0.grid.n; ++k) v1.v[k] = v0.v[k] + c * d.v.v[k];
        return std::pair{q1, v1};
    };

    const QVDot k1 = qv_rhs(s.q, s.v, scheme);
    const auto [q2, v2] = step(s.q, s.v, k1, dt / 2);
    const QVDot k2 = qv_rhs(q2, v2, scheme);
    const auto [q3, v3] = step(s.q, s.v, k2, dt / 2);
    const QVDot k3 = qv_rhs(q3, v3, scheme);
    const auto [q4, v4] = step(s.q, s.v, k3, dt);
    const QVDot k4 = qv_rhs(q4, v4, scheme);

    QVState out;
    out.t = s.t + dt;
    out.q = SymMat3Field(s.q.grid);
    out.v = ScalarField(s.q.grid);
    const double c = dt / 6.0;
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < s.q.grid.n; ++k)
            out.q.c[j][k] = s.q.c[j][k] + c * (k1.q.c[j][k] + 2 * k2.q.c[j][k] +
                                               2 * k3.q.c[j][k] + k4.q.c[j][k]);
    for (int k = 0; k < s.q.grid.n; ++k)
        out.v.v[k] = s.v.v[k] + c * (k1.v.v[k] + 2 * k2.v.v[k] + 2 * k3.v.v[k] +
                                     k4.v.v[k]);

    if (!out.q.finite() || !out.v.finite())
        throw UnstableStep("evolve_qv_step: non-finite state", out.t);

    if (renormalize)
        for (int k = 0; k < out.q.grid.n; ++k) {
            const double d = out.q.at(k).det();
            if (d <= 0)
                throw NotPositiveDefinite("evolve_qv_step: det Q became non-positive");
            out.q.set(k, out.q.at(k) * (1.0 / std::cbrt(d)));
        }
    return out;
}

}  // namespace hsflow
