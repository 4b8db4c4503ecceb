#pragma once

// Pointwise 3x3 algebra for the coefficient matrices of a torus-invariant
// triple of 2-forms.  A general coefficient matrix alpha splits as
// alpha = beta + skew(gamma) with beta symmetric and the skew part encoded
// by the vector gamma = (g23, g31, g12).  Everything here is plain value
// arithmetic on doubles; no allocation, safe to call from any thread.
//
// Besides the basic types this header exposes the standalone linear-algebra
// facts the flow analysis runs on:
//   det_split       det(alpha) = det(beta) + gamma^T beta gamma
//   trace_gap       the sextic trace inequality behind the torsion decay
//   sos_certificate the two-square form certifying that inequality
//   inner_alpha     <b,c>_a = tr(a^-1 b a^-1 c), the symmetric-space metric

#include <array>
#include <cmath>
#include <utility>

#include "hsflow/errors.hpp"

namespace hsflow {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    double max_abs() const {
        return std::fmax(std::fabs(x), std::fmax(std::fabs(y), std::fabs(z)));
    }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Row-major 3x3 matrix, indices 0..2.
struct Mat3 {
    std::array<double, 9> m{};

    static Mat3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
    static Mat3 diag(double a, double b, double c) {
        return {{a, 0, 0, 0, b, 0, 0, 0, c}};
    }

    double& operator()(int i, int j) { return m[3 * i + j]; }
    double operator()(int i, int j) const { return m[3 * i + j]; }

    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
        return r;
    }
    Mat3 operator*(double s) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = m[i] * s;
        return r;
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3 transpose() const {
        return {{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
    }
    double trace() const { return m[0] + m[4] + m[8]; }

    // Cofactor expansion along the first row.
    double det() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) -
               m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    double max_abs() const {
        double r = 0;
        for (double e : m) r = std::fmax(r, std::fabs(e));
        return r;
    }
    bool finite() const {
        for (double e : m)
            if (!std::isfinite(e)) return false;
        return true;
    }
};

inline Mat3 operator*(double s, const Mat3& a) { return a * s; }

// Symmetric 3x3 matrix stored as six reals; no redundant entries, so
// symmetry is exact by construction.
struct SymMat3 {
    double s11 = 0, s22 = 0, s33 = 0, s12 = 0, s13 = 0, s23 = 0;

    static SymMat3 identity() { return {1, 1, 1, 0, 0, 0}; }
    static SymMat3 diag(double a, double b, double c) { return {a, b, c, 0, 0, 0}; }

    double& operator[](int k) { return (&s11)[k]; }
    double operator[](int k) const { return (&s11)[k]; }

    double operator()(int i, int j) const {
        if (i == j) return (&s11)[i];
        int k = i + j;  // (0,1)->1, (0,2)->2, (1,2)->3
        return k == 1 ? s12 : (k == 2 ? s13 : s23);
    }

    Mat3 full() const {
        return {{s11, s12, s13, s12, s22, s23, s13, s23, s33}};
    }

    SymMat3 operator+(const SymMat3& o) const {
        return {s11 + o.s11, s22 + o.s22, s33 + o.s33,
                s12 + o.s12, s13 + o.s13, s23 + o.s23};
    }
    SymMat3 operator-(const SymMat3& o) const {
        return {s11 - o.s11, s22 - o.s22, s33 - o.s33,
                s12 - o.s12, s13 - o.s13, s23 - o.s23};
    }
    SymMat3 operator*(double c) const {
        return {s11 * c, s22 * c, s33 * c, s12 * c, s13 * c, s23 * c};
    }

    double trace() const { return s11 + s22 + s33; }
    double det() const {
        return s11 * (s22 * s33 - s23 * s23) - s12 * (s12 * s33 - s23 * s13) +
               s13 * (s12 * s23 - s22 * s13);
    }
    Vec3 operator*(const Vec3& v) const {
        return {s11 * v.x + s12 * v.y + s13 * v.z,
                s12 * v.x + s22 * v.y + s23 * v.z,
                s13 * v.x + s23 * v.y + s33 * v.z};
    }
    double quad_form(const Vec3& v) const { return v.dot((*this) * v); }

    double max_abs() const {
        double r = 0;
        for (int k = 0; k < 6; ++k) r = std::fmax(r, std::fabs((*this)[k]));
        return r;
    }
    double frob_norm() const {
        return std::sqrt(s11 * s11 + s22 * s22 + s33 * s33 +
                         2 * (s12 * s12 + s13 * s13 + s23 * s23));
    }
    bool finite() const {
        for (int k = 0; k < 6; ++k)
            if (!std::isfinite((*this)[k])) return false;
        return true;
    }
};

inline SymMat3 operator*(double c, const SymMat3& a) { return a * c; }

// Exact symmetric part (entrywise average).
inline SymMat3 sym_part(const Mat3& a) {
    return {a(0, 0), a(1, 1), a(2, 2),
            0.5 * (a(0, 1) + a(1, 0)),
            0.5 * (a(0, 2) + a(2, 0)),
            0.5 * (a(1, 2) + a(2, 1))};
}

// Skew part encoded as gamma = (g23, g31, g12).
inline Vec3 skew_vec(const Mat3& a) {
    return {0.5 * (a(1, 2) - a(2, 1)),
            0.5 * (a(2, 0) - a(0, 2)),
            0.5 * (a(0, 1) - a(1, 0))};
}

inline Mat3 skew_from_vec(const Vec3& g) {
    return {{0, g.z, -g.y, -g.z, 0, g.x, g.y, -g.x, 0}};
}

inline Mat3 assemble(const SymMat3& b, const Vec3& g) {
    Mat3 a = b.full();
    a(0, 1) += g.z;  a(1, 0) -= g.z;
    a(0, 2) -= g.y;  a(2, 0) += g.y;
    a(1, 2) += g.x;  a(2, 1) -= g.x;
    return a;
}

inline SymMat3 sym_of_product(const Mat3& a) {  // sym part of a general product
    return sym_part(a);
}

// a * b * a for symmetric a, b (result symmetric).
SymMat3 sandwich(const SymMat3& a, const SymMat3& b);

// Product of two symmetric matrices (generally not symmetric).
Mat3 mul(const SymMat3& a, const SymMat3& b);

// Cholesky factorization a = L L^T.  Returns false on a non-positive pivot.
// L stored as (l11,l21,l22,l31,l32,l33).
bool cholesky(const SymMat3& a, std::array<double, 6>& l);

bool is_positive_definite(const SymMat3& a);

// Inverse of a symmetric matrix by adjugate; throws NotPositiveDefinite
// when a Cholesky factorization fails first.
SymMat3 inverse_spd(const SymMat3& a);

// Unchecked adjugate inverse (for matrices already known invertible).
SymMat3 inverse_sym(const SymMat3& a);

// Eigenvalues (ascending) and orthonormal eigenvectors (columns of .vectors)
// of a symmetric matrix, by cyclic Jacobi rotations.
struct EigenSym3 {
    Vec3 values;
    Mat3 vectors;
};
EigenSym3 eig_sym(const SymMat3& a);

// Symmetric square root / inverse square root of an SPD matrix.
SymMat3 sqrt_spd(const SymMat3& a);
SymMat3 invsqrt_spd(const SymMat3& a);

// ---- standalone identities -------------------------------------------------

// Symmetric/skew split with the (g23, g31, g12) vector convention.
inline std::pair<SymMat3, Vec3> split(const Mat3& a) {
    return {sym_part(a), skew_vec(a)};
}

// Both sides of det(alpha) = det(beta) + gamma^T beta gamma.
std::pair<double, double> det_split(const Mat3& a);

// <b,c>_a = tr(a^-1 b a^-1 c); throws NotPositiveDefinite if a is not SPD.
double inner_alpha(const SymMat3& a, const SymMat3& b, const SymMat3& c);

// Trace monomials of a pair of symmetric matrices.
struct TraceMonomials {
    double trB2 = 0, trB3 = 0, trB4 = 0, trAB = 0, trAB2 = 0, trA2 = 0;
};
TraceMonomials trace_monomials(const SymMat3& a, const SymMat3& b);

// RHS - LHS of the sextic trace inequality
//   (trAB)^2 - 4 trAB trB3 + 3 (trB3)^2 + 4 trAB2 trB2
//     - trA2 trB2 - 3 trB4 trB2  <=  (1/6) (trB2)^3,
// valid for symmetric A, B with tr B = 0 and tr A = tr B^2.  Throws
// ConstraintViolated when those preconditions fail.
double trace_gap(const SymMat3& a, const SymMat3& b);

// Same quantity computed directly from monomials, no precondition check.
double trace_gap_unchecked(const TraceMonomials& t);

// The diagonal reduction of the inequality above and its certificate:
// for trace-free x, y the gap equals
//   3 [ (x1 y2 - x2 y1) - (1/3)(y1+2y2)(2y1+y2)(y1-y2) ]^2
//     + 9 y1^2 y2^2 (y1+y2)^2.
// Returns (gap evaluated from traces, gap evaluated as the two squares).
std::pair<double, double> sos_certificate(const Vec3& x, const Vec3& y);

}  // namespace hsflow
