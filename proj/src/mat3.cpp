#include "hsflow/mat3.hpp"

#include <algorithm>
#include <cmath>

namespace hsflow {

Mat3 mul(const SymMat3& a, const SymMat3& b) { return a.full() * b.full(); }

SymMat3 sandwich(const SymMat3& a, const SymMat3& b) {
    return sym_part(a.full() * b.full() * a.full());
}

bool cholesky(const SymMat3& a, std::array<double, 6>& l) {
    if (a.s11 <= 0) return false;
    const double l11 = std::sqrt(a.s11);
    const double l21 = a.s12 / l11;
    const double l31 = a.s13 / l11;
    const double d22 = a.s22 - l21 * l21;
    if (d22 <= 0) return false;
    const double l22 = std::sqrt(d22);
    const double l32 = (a.s23 - l31 * l21) / l22;
    const double d33 = a.s33 - l31 * l31 - l32 * l32;
    if (d33 <= 0) return false;
    l = {l11, l21, l22, l31, l32, std::sqrt(d33)};
    return true;
}

bool is_positive_definite(const SymMat3& a) {
    std::array<double, 6> l;
    return cholesky(a, l);
}

SymMat3 inverse_sym(const SymMat3& a) {
    const double d = a.det();
    const double c11 = a.s22 * a.s33 - a.s23 * a.s23;
    const double c22 = a.s11 * a.s33 - a.s13 * a.s13;
    const double c33 = a.s11 * a.s22 - a.s12 * a.s12;
    const double c12 = a.s13 * a.s23 - a.s12 * a.s33;
    const double c13 = a.s12 * a.s23 - a.s13 * a.s22;
    const double c23 = a.s12 * a.s13 - a.s11 * a.s23;
    return {c11 / d, c22 / d, c33 / d, c12 / d, c13 / d, c23 / d};
}

SymMat3 inverse_spd(const SymMat3& a) {
    if (!is_positive_definite(a))
        throw NotPositiveDefinite("matrix is not positive definite");
    return inverse_sym(a);
}

EigenSym3 eig_sym(const SymMat3& s) {
    // Cyclic Jacobi on the full matrix; converges in a handful of sweeps.
    Mat3 a = s.full();
    Mat3 v = Mat3::identity();
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::fabs(a(0, 1)) + std::fabs(a(0, 2)) + std::fabs(a(1, 2));
        if (off == 0.0) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double sn = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
    }
    // sort ascending, permuting eigenvector columns along
    std::array<int, 3> idx = {0, 1, 2};
    std::array<double, 3> w = {a(0, 0), a(1, 1), a(2, 2)};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return w[i] < w[j]; });
    EigenSym3 r;
    Mat3 pv;
    for (int j = 0; j < 3; ++j) {
        r.values[j] = w[idx[j]];
        for (int i = 0; i < 3; ++i) pv(i, j) = v(i, idx[j]);
    }
    r.vectors = pv;
    return r;
}

static SymMat3 rescale_spectrum(const SymMat3& a, double (*f)(double)) {
    const EigenSym3 e = eig_sym(a);
    if (e.values.x <= 0)
        throw NotPositiveDefinite("matrix is not positive definite");
    const Mat3& p = e.vectors;
    const Mat3 d = Mat3::diag(f(e.values.x), f(e.values.y), f(e.values.z));
    return sym_part(p * d * p.transpose());
}

SymMat3 sqrt_spd(const SymMat3& a) {
    return rescale_spectrum(a, [](double x) { return std::sqrt(x); });
}

SymMat3 invsqrt_spd(const SymMat3& a) {
    return rescale_spectrum(a, [](double x) { return 1.0 / std::sqrt(x); });
}

std::pair<double, double> det_split(const Mat3& a) {
    const auto [b, g] = split(a);
    return {a.det(), b.det() + b.quad_form(g)};
}

double inner_alpha(const SymMat3& a, const SymMat3& b, const SymMat3& c) {
    const SymMat3 ai = inverse_spd(a);
    const Mat3 t1 = mul(ai, b);
    const Mat3 t2 = mul(ai, c);
    return (t1 * t2).trace();
}

TraceMonomials trace_monomials(const SymMat3& a, const SymMat3& b) {
    const Mat3 bf = b.full();
    const Mat3 b2 = bf * bf;
    const Mat3 af = a.full();
    TraceMonomials t;
    t.trB2 = b2.trace();
    t.trB3 = (b2 * bf).trace();
    t.trB4 = (b2 * b2).trace();
    t.trAB = (af * bf).trace();
    t.trAB2 = (af * b2).trace();
    t.trA2 = (af * af).trace();
    return t;
}

double trace_gap_unchecked(const TraceMonomials& t) {
    return t.trB2 * t.trB2 * t.trB2 / 6.0 + t.trA2 * t.trB2 +
           3.0 * t.trB4 * t.trB2 + 4.0 * t.trAB * t.trB3 -
           t.trAB * t.trAB - 3.0 * t.trB3 * t.trB3 - 4.0 * t.trAB2 * t.trB2;
}

double trace_gap(const SymMat3& a, const SymMat3& b) {
    const TraceMonomials t = trace_monomials(a, b);
    const double nb = b.frob_norm();
    const double na = a.frob_norm();
    if (std::fabs(b.trace()) > 1e-12 * std::fmax(nb, 1.0))
        throw ConstraintViolated("trace_gap: tr B != 0");
    if (std::fabs(a.trace() - t.trB2) > 1e-12 * (na + nb * nb + 1.0))
        throw ConstraintViolated("trace_gap: tr A != tr B^2");
    return trace_gap_unchecked(t);
}

std::pair<double, double> sos_certificate(const Vec3& x, const Vec3& y) {
    const double sx = x.x + x.y + x.z;
    const double sy = y.x + y.y + y.z;
    if (std::fabs(sx) > 1e-12 * std::fmax(x.max_abs(), 1.0) ||
        std::fabs(sy) > 1e-12 * std::fmax(y.max_abs(), 1.0))
        throw ConstraintViolated("sos_certificate: inputs must be trace-free");

    const double sx2 = x.dot(x);
    const double sy2 = y.dot(y);
    const double sxy = x.dot(y);
    const double sy3 = y.x * y.x * y.x + y.y * y.y * y.y + y.z * y.z * y.z;
    const double sxy2 = x.x * y.x * y.x + x.y * y.y * y.y + x.z * y.z * y.z;
    const double direct =
        sx2 * sy2 + sy2 * sy2 * sy2 / 6.0 - sxy * sxy + 2.0 * sxy * sy3 -
        2.0 * sxy2 * sy2;

    const double cross = x.x * y.y - x.y * y.x;
    const double cubic =
        (y.x + 2 * y.y) * (2 * y.x + y.y) * (y.x - y.y) / 3.0;
    const double sq1 = cross - cubic;
    const double sq2 = y.x * y.y * (y.x + y.y);
    const double sos = 3.0 * sq1 * sq1 + 9.0 * sq2 * sq2;
    return {direct, sos};
}

}  // namespace hsflow
