#include "hsflow/audit.hpp"

#include <cmath>

#include "hsflow/geometry.hpp"

namespace hsflow {

DiagnosticsRecord audit(const FlowState& s, const Mat3Field& alpha0, Scheme scheme) {
    DiagnosticsRecord r;
    r.t = s.t;

    ScalarField v;
    SymMat3Field q;
    v_q_fields(s.beta, v, q);

    r.v = integrate(v);
    r.cohom = integrate(s.beta);

    const ScalarField torsion = torsion_field(s.beta, scheme);
    r.torsion_max = 0;
    for (double e : torsion.v) r.torsion_max = std::fmax(r.torsion_max, e);

    const SymMat3Field beta0 = sym_part(alpha0);
    const Vec3Field gamma0 = skew_vec(alpha0);
    r.volume_bound = 0;
    {
        ScalarField tr0(alpha0.grid);
        for (int k = 0; k < alpha0.grid.n; ++k) tr0.v[k] = beta0.at(k).trace();
        r.volume_bound = integrate(tr0) / 3.0;
    }

    r.trQ_max = 0;
    r.detQ_err_max = 0;
    r.skew_drift_max = 0;
    bool first = true;
    for (int k = 0; k < s.grid().n; ++k) {
        const SymMat3 qk = q.at(k);
        r.trQ_max = std::fmax(r.trQ_max, qk.trace());
        r.detQ_err_max = std::fmax(r.detQ_err_max, std::fabs(qk.det() - 1.0));
        r.skew_drift_max =
            std::fmax(r.skew_drift_max, (s.gamma.at(k) - gamma0.at(k)).max_abs());
        const Vec3 ew_q = eig_sym(qk).values;
        const double lo_b = eig_sym(s.beta.at(k)).values.x;
        if (first) {
            r.eig_lo = ew_q.x;
            r.eig_hi = ew_q.z;
            r.min_eig_beta = lo_b;
            first = false;
        } else {
            r.eig_lo = std::fmin(r.eig_lo, ew_q.x);
            r.eig_hi = std::fmax(r.eig_hi, ew_q.z);
            r.min_eig_beta = std::fmin(r.min_eig_beta, lo_b);
        }
    }
    return r;
}

RiccatiReport riccati_check(std::span<const std::pair<double, double>> series) {
    RiccatiReport rep;
    if (series.empty()) return rep;
    const double t0 = series.front().first;
    const double top = series.front().second;
    bool first = true;
    for (const auto& [t, val] : series) {
        const double envelope = top / (1.0 + top * (t - t0) / 3.0);
        const double violation = val - (envelope * (1.0 + 1e-6) + 1e-8);
        if (first || violation > rep.worst_margin) rep.worst_margin = violation;
        first = false;
        if (violation > 0) rep.ok = false;
    }
    return rep;
}

ScalarField torsion_heat_residual(const FlowState& prev, const FlowState& cur,
                                  const FlowState& next, Scheme scheme) {
    require_same_grid(prev.grid(), cur.grid());
    require_same_grid(cur.grid(), next.grid());
    const double dt1 = cur.t - prev.t;
    const double dt2 = next.t - cur.t;
    if (std::fabs(dt1 - dt2) > 1e-12 * std::fmax(dt1, dt2) || dt1 <= 0)
        throw ConstraintViolated("torsion_heat_residual: snapshots must be equally spaced");

    const ScalarField t_prev = torsion_field(prev.beta, scheme);
    const ScalarField t_cur = torsion_field(cur.beta, scheme);
    const ScalarField t_next = torsion_field(next.beta, scheme);
    const ScalarField v = v_field(cur.beta);
    const ScalarField lap = invariant_laplacian(t_cur, v, scheme);
    const ScalarField rhs = torsion_heat_rhs(cur.beta, scheme);

    ScalarField res(cur.grid());
    for (int k = 0; k < cur.grid().n; ++k)
        res.v[k] = (t_next.v[k] - t_prev.v[k]) / (dt1 + dt2) - lap.v[k] - rhs.v[k];
    return res;
}

double Rank3Field::max_abs() const {
    double r = 0;
    for (double e : c) r = std::fmax(r, std::fabs(e));
    return r;
}

double Rank4Field::max_abs() const {
    double r = 0;
    for (double e : c) r = std::fmax(r, std::fabs(e));
    return r;
}

double CurvatureHat::max_abs() const {
    return std::fmax(r_yiyj.max_abs(),
                     std::fmax(r_ijkl.max_abs(), r_yijk.max_abs()));
}

CurvatureHat curvature_hat(const SymMat3Field& qhat, double v, Scheme scheme) {
    const int n = qhat.grid.n;
    for (int k = 0; k < n; ++k) {
        if (!is_positive_definite(qhat.at(k)))
            throw NotPositiveDefinite("curvature_hat: Qhat not positive definite");
        if (std::fabs(qhat.at(k).det() - 1.0) > 1e-8)
            throw ConstraintViolated("curvature_hat: det Qhat deviates from 1");
    }
    const SymMat3Field qp = deriv(qhat, 1, scheme);
    const SymMat3Field qpp = deriv(qhat, 2, scheme);

    CurvatureHat out;
    out.r_yiyj = Mat3Field(qhat.grid);
    out.r_ijkl = Rank4Field(qhat.grid);
    out.r_yijk = Rank3Field(qhat.grid);  // identically zero

    const double c4 = 0.25 * (two_pi / v) * (two_pi / v);
    for (int node = 0; node < n; ++node) {
        const SymMat3 qi = inverse_sym(qhat.at(node));
        const Mat3 qpqi = mul(qp.at(node), qi);    // (Q' Q^{-1})_{ij}
        const Mat3 qppqi = mul(qpp.at(node), qi);  // (Q'' Q^{-1})_{ij}
        const Mat3 second = qpqi * qpqi;
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r(i, j) = 0.5 * qppqi(i, j) - 0.25 * second(i, j);
        out.r_yiyj.set(node, r);

        const SymMat3 qpn = qp.at(node);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        out.r_ijkl.slot(node, i, j, k, l) =
                            c4 * (qpn(i, k) * qpqi(j, l) - qpqi(i, l) * qpn(j, k));
    }
    return out;
}

namespace {

inline double inner_with(const SymMat3& ai, const SymMat3& x, const SymMat3& y) {
    return (mul(ai, x) * mul(ai, y)).trace();
}

}  // namespace

SymMat3Field linearize(const SymMat3Field& alpha, const SymMat3Field& beta,
                       Scheme scheme) {
    require_same_grid(alpha.grid, beta.grid);
    const SymMat3Field a1 = deriv(alpha, 1, scheme);
    const SymMat3Field a2 = deriv(alpha, 2, scheme);
    const SymMat3Field b1 = deriv(beta, 1, scheme);
    const SymMat3Field b2 = deriv(beta, 2, scheme);

    SymMat3Field out(alpha.grid);
    for (int k = 0; k < alpha.grid.n; ++k) {
        const SymMat3 a = alpha.at(k);
        const SymMat3 ap = a1.at(k), app = a2.at(k);
        const SymMat3 b = beta.at(k);
        const SymMat3 bp = b1.at(k), bpp = b2.at(k);

        const SymMat3 ai = inverse_spd(a);
        const double det = a.det();
        const double v2 = std::cbrt(det * det);

        const double i_a_ap = mul(ai, ap).trace();
        const double i_a_app = mul(ai, app).trace();
        const double i_a_bp = mul(ai, bp).trace();
        const double i_a_bpp = mul(ai, bpp).trace();
        const double i_a_b = mul(ai, b).trace();
        const double i_ap_b = inner_with(ai, ap, b);
        const double i_app_b = inner_with(ai, app, b);
        const double i_ap_bp = inner_with(ai, ap, bp);
        const double i_ap_ap = inner_with(ai, ap, ap);
        const SymMat3 apap = sym_part(mul(ap, ai) * ap.full());
        const double i_apap_b = inner_with(ai, apap, b);

        // second-order and first-order blocks
        SymMat3 t = bpp;
        t = t - a * (i_a_bpp / 3.0);
        t = t + a * (i_app_b / 3.0);
        t = t - b * (i_a_app / 3.0);
        t = t - ap * i_a_bp;
        t = t + ap * i_ap_b;
        t = t - bp * i_a_ap;
        // zeroth-order block
        t = t + a * (2.0 / 3.0 * i_ap_bp);
        t = t - a * (2.0 / 3.0 * i_apap_b);
        t = t + b * (i_ap_ap / 3.0);
        t = t + a * (4.0 / 9.0 * i_a_ap * i_a_bp);
        t = t - a * (4.0 / 9.0 * i_a_ap * i_ap_b);
        t = t + b * (2.0 / 9.0 * i_a_ap * i_a_ap);
        t = t * (1.0 / v2);
        // variation of V^{-2} through det
        const SymMat3 d = expanded_rhs_point(a, ap, app);
        t = t - d * (2.0 / 3.0 * i_a_b);
        out.set(k, t);
    }
    return out;
}

SymMat3 principal_symbol(const SymMat3& alpha, double xi, const SymMat3& beta) {
    const SymMat3 ai = inverse_spd(alpha);
    const double v2 = std::cbrt(alpha.det() * alpha.det());
    const double proj = mul(ai, beta).trace() / 3.0;
    return (beta - alpha * proj) * (xi * xi / v2);
}

std::pair<SymMat3, SymMat3> audit_pair(const SymMat3& q, const SymMat3& qp,
                                       const SymMat3& qpp) {
    const SymMat3 s = invsqrt_spd(q);
    return {sandwich(s, qpp), sandwich(s, qp)};
}

}  // namespace hsflow
