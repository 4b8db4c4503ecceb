#include "hsflow/fuzz.hpp"

#include <cmath>

#include "hsflow/mat3.hpp"

namespace hsflow {

namespace {

Mat3 random_mat(Rng& r) {
    Mat3 a;
    for (int i = 0; i < 9; ++i) a.m[i] = r.sym();
    return a;
}

Mat3 random_mat_lattice(Rng& r) {
    Mat3 a;
    for (int i = 0; i < 9; ++i) a.m[i] = r.lattice();
    return a;
}

SymMat3 random_sym(Rng& r) {
    return {r.sym(), r.sym(), r.sym(), r.sym(), r.sym(), r.sym()};
}

SymMat3 random_traceless_sym(Rng& r) {
    SymMat3 s = random_sym(r);
    const double t = s.trace() / 3.0;
    s.s11 -= t;
    s.s22 -= t;
    s.s33 -= t;
    return s;
}

// Uniform rotation from a quaternion drawn in the unit ball.
Mat3 random_rotation(Rng& r) {
    double q0, q1, q2, q3, n2;
    do {
        q0 = r.sym();
        q1 = r.sym();
        q2 = r.sym();
        q3 = r.sym();
        n2 = q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3;
    } while (n2 < 1e-4 || n2 > 1.0);
    const double s = 1.0 / n2;
    Mat3 p;
    p(0, 0) = 1 - 2 * s * (q2 * q2 + q3 * q3);
    p(0, 1) = 2 * s * (q1 * q2 - q0 * q3);
    p(0, 2) = 2 * s * (q1 * q3 + q0 * q2);
    p(1, 0) = 2 * s * (q1 * q2 + q0 * q3);
    p(1, 1) = 1 - 2 * s * (q1 * q1 + q3 * q3);
    p(1, 2) = 2 * s * (q2 * q3 - q0 * q1);
    p(2, 0) = 2 * s * (q1 * q3 - q0 * q2);
    p(2, 1) = 2 * s * (q2 * q3 + q0 * q1);
    p(2, 2) = 1 - 2 * s * (q1 * q1 + q2 * q2);
    return p;
}

template <class Body>
FuzzResult suite(const std::string& name, long trials, double tol,
                 std::uint64_t seed, Body body) {
    double worst = -1e300;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (long i = 0; i < trials; ++i) {
        Rng r(seed ^ (0xabcdef12345678ULL + 0x9e3779b97f4a7c15ULL * i));
        worst = std::fmax(worst, body(r));
    }
    return {name, trials, worst, tol, worst <= tol};
}

}  // namespace

std::vector<FuzzResult> run_lemma_fuzz(std::uint64_t seed, long trials) {
    std::vector<FuzzResult> out;

    out.push_back(suite("split-reconstruct", trials, 0.0, seed, [](Rng& r) {
        const Mat3 a = random_mat_lattice(r);
        const auto [b, g] = split(a);
        return (assemble(b, g) - a).max_abs();
    }));

    out.push_back(suite("det-split", trials, 0.0, seed + 1, [](Rng& r) {
        const Mat3 a = random_mat(r);
        const auto [lhs, rhs] = det_split(a);
        return std::fabs(lhs - rhs) - 1e-12 * (1.0 + std::fabs(lhs));
    }));
    out.back().name = "det-split";

    out.push_back(suite("so3-equivariance", trials, 1e-12, seed + 2, [](Rng& r) {
        const Mat3 p = random_rotation(r);
        const Vec3 g = {r.sym(), r.sym(), r.sym()};
        const Mat3 s = skew_from_vec(g);
        const Vec3 lhs = skew_vec(p * s * p.transpose());
        const Vec3 rhs = p * g;
        return (lhs - rhs).max_abs();
    }));

    out.push_back(suite("trace-gap", trials, 1e-10, seed + 3, [](Rng& r) {
        SymMat3 b = random_traceless_sym(r);
        const double nb = b.frob_norm();
        if (nb < 1e-8) return 0.0;
        b = b * (1.0 / nb);
        const SymMat3 at = random_traceless_sym(r);
        const SymMat3 a = sym_part(b.full() * b.full()) + at;
        return -trace_gap(a, b);  // violation when positive
    }));

    out.push_back(suite("sos-certificate", trials, 0.0, seed + 4, [](Rng& r) {
        const double x1 = r.sym(), x2 = r.sym();
        const double y1 = r.sym(), y2 = r.sym();
        const Vec3 x = {x1, x2, -x1 - x2};
        const Vec3 y = {y1, y2, -y1 - y2};
        const auto [direct, sos] = sos_certificate(x, y);
        return std::fabs(direct - sos) - 1e-10 * (1.0 + std::fabs(direct));
    }));

    out.push_back(suite("inner-alpha", trials, 1e-11, seed + 5, [](Rng& r) {
        const Mat3 m = random_mat(r);
        const SymMat3 a = sym_part(m.transpose() * m) + SymMat3::diag(0.5, 0.5, 0.5);
        const SymMat3 b = random_sym(r);
        const SymMat3 c = random_sym(r);
        const double sym_err = std::fabs(inner_alpha(a, b, c) - inner_alpha(a, c, b));
        const double contr_err =
            std::fabs(inner_alpha(a, a, b) - mul(inverse_spd(a), b).trace());
        return std::fmax(sym_err, contr_err);
    }));

    return out;
}

}  // namespace hsflow
