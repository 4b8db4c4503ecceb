#include "hsflow/kernels.hpp"

#include <cmath>
#include <limits>

#include "hsflow/mat3.hpp"

namespace hsflow {

namespace {

// Below this size the OpenMP fork/join overhead outweighs the work.
constexpr int omp_grain = 512;

// NaN instead of throwing: exceptions must not cross an OpenMP region, so
// callers test the flag after the loop.
inline double v_at(const SymMat3& b, bool& ok) {
    std::array<double, 6> l;
    if (!cholesky(b, l)) {
        ok = false;
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::cbrt(b.det());
}

}  // namespace

ScalarField v_field(const SymMat3Field& beta) {
    const int n = beta.grid.n;
    ScalarField v(beta.grid);
    bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok) if (n >= omp_grain)
    for (int k = 0; k < n; ++k) v.v[k] = v_at(beta.at(k), ok);
    if (!ok) throw NotPositiveDefinite("flow kernel: beta lost positive definiteness");
    return v;
}

void v_q_fields(const SymMat3Field& beta, ScalarField& v, SymMat3Field& q) {
    const int n = beta.grid.n;
    v = ScalarField(beta.grid);
    q = SymMat3Field(beta.grid);
    bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok) if (n >= omp_grain)
    for (int k = 0; k < n; ++k) {
        const SymMat3 b = beta.at(k);
        const double vv = v_at(b, ok);
        v.v[k] = vv;
        q.set(k, b * (1.0 / vv));
    }
    if (!ok) throw NotPositiveDefinite("flow kernel: beta lost positive definiteness");
}

SymMat3Field rhs_core(const SymMat3Field& beta, Scheme scheme) {
    const int n = beta.grid.n;
    ScalarField v;
    SymMat3Field q;
    v_q_fields(beta, v, q);
    SymMat3Field qp = deriv(q, 1, scheme);
#pragma omp parallel for schedule(static) if (n >= omp_grain)
    for (int k = 0; k < n; ++k) {
        const double iv = 1.0 / v.v[k];
        for (int j = 0; j < 6; ++j) qp.c[j][k] *= iv;
    }
    return deriv(qp, 1, scheme);
}

ScalarField torsion_field(const SymMat3Field& beta, Scheme scheme) {
    const int n = beta.grid.n;
    ScalarField v;
    SymMat3Field q;
    v_q_fields(beta, v, q);
    const SymMat3Field qp = deriv(q, 1, scheme);
    ScalarField t(beta.grid);
#pragma omp parallel for schedule(static) if (n >= omp_grain)
    for (int k = 0; k < n; ++k) {
        const Mat3 m = mul(inverse_sym(q.at(k)), qp.at(k));
        t.v[k] = (m * m).trace() / (v.v[k] * v.v[k]);
    }
    return t;
}

ScalarField torsion_heat_rhs(const SymMat3Field& beta, Scheme scheme) {
    const int n = beta.grid.n;
    ScalarField v;
    SymMat3Field q;
    v_q_fields(beta, v, q);
    const ScalarField vp = deriv(v, 1, scheme);
    const SymMat3Field qp = deriv(q, 1, scheme);
    const SymMat3Field qpp = deriv(q, 2, scheme);

    ScalarField torsion(beta.grid);
    std::vector<TraceMonomials> tm(n);
#pragma omp parallel for schedule(static) if (n >= omp_grain)
    for (int k = 0; k < n; ++k) {
        const SymMat3 qi = inverse_sym(q.at(k));
        const Mat3 b = mul(qi, qp.at(k));   // similar to Q^{-1/2} Q' Q^{-1/2}
        const Mat3 a = mul(qi, qpp.at(k));  // similar to Q^{-1/2} Q'' Q^{-1/2}
        const Mat3 b2 = b * b;
        TraceMonomials& t = tm[k];
        t.trB2 = b2.trace();
        t.trB3 = (b2 * b).trace();
        t.trB4 = (b2 * b2).trace();
        t.trAB = (a * b).trace();
        t.trAB2 = (a * b2).trace();
        t.trA2 = (a * a).trace();
        torsion.v[k] = t.trB2 / (v.v[k] * v.v[k]);
    }
    const ScalarField tp = deriv(torsion, 1, scheme);

    ScalarField rhs(beta.grid);
#pragma omp parallel for schedule(static) if (n >= omp_grain)
    for (int k = 0; k < n; ++k) {
        const double vv = v.v[k];
        const double v2 = vv * vv, v4 = v2 * v2;
        const double w = vp.v[k] / vv;
        const double tt = torsion.v[k];
        const TraceMonomials& t = tm[k];
        rhs.v[k] = -2.0 / 3.0 * tt * tt + 8.0 / v2 * w * w * tt -
                   6.0 / v4 * w * t.trAB + 2.0 / v4 * w * t.trB3 +
                   8.0 / v4 * t.trAB2 +
                   (5.0 * w * tp.v[k] - 2.0 / v2 * t.trA2 - 6.0 / v2 * t.trB4) / v2;
    }
    return rhs;
}

double q_prime_max(const SymMat3Field& beta, Scheme scheme) {
    ScalarField v;
    SymMat3Field q;
    v_q_fields(beta, v, q);
    return deriv(q, 1, scheme).max_abs();
}

namespace ref {

ScalarField v_field(const SymMat3Field& beta) {
    ScalarField v(beta.grid);
    bool ok = true;
    for (int k = 0; k < beta.grid.n; ++k) v.v[k] = v_at(beta.at(k), ok);
    if (!ok) throw NotPositiveDefinite("flow kernel: beta lost positive definiteness");
    return v;
}

void v_q_fields(const SymMat3Field& beta, ScalarField& v, SymMat3Field& q) {
    v = ScalarField(beta.grid);
    q = SymMat3Field(beta.grid);
    bool ok = true;
    for (int k = 0; k < beta.grid.n; ++k) {
        const SymMat3 b = beta.at(k);
        const double vv = v_at(b, ok);
        v.v[k] = vv;
        q.set(k, b * (1.0 / vv));
    }
    if (!ok) throw NotPositiveDefinite("flow kernel: beta lost positive definiteness");
}

SymMat3Field rhs_core(const SymMat3Field& beta, Scheme scheme) {
    ScalarField v;
    SymMat3Field q;
    ref::v_q_fields(beta, v, q);
    SymMat3Field qp = deriv(q, 1, scheme);
    for (int k = 0; k < beta.grid.n; ++k) {
        const double iv = 1.0 / v.v[k];
        for (int j = 0; j < 6; ++j) qp.c[j][k] *= iv;
    }
    return deriv(qp, 1, scheme);
}

ScalarField torsion_field(const SymMat3Field& beta, Scheme scheme) {
    ScalarField v;
    SymMat3Field q;
    ref::v_q_fields(beta, v, q);
    const SymMat3Field qp = deriv(q, 1, scheme);
    ScalarField t(beta.grid);
    for (int k = 0; k < beta.grid.n; ++k) {
        const Mat3 m = mul(inverse_sym(q.at(k)), qp.at(k));
        t.v[k] = (m * m).trace() / (v.v[k] * v.v[k]);
    }
    return t;
}

}  // namespace ref

}  // namespace hsflow
