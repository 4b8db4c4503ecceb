#include "hsflow/geometry.hpp"

#include <cmath>

namespace hsflow {

GeometrySample geometry_at(const Mat3& alpha, const Mat3& alpha_prime) {
    const auto [beta, gvec] = split(alpha);
    if (!is_positive_definite(beta))
        throw NotPositiveDefinite("geometry_at: sym(alpha) is not positive definite");

    GeometrySample s;
    const double det_beta = beta.det();
    s.V = std::cbrt(det_beta);
    s.Q = beta * (1.0 / s.V);
    s.gamma_vec = gvec;
    s.mu = s.V;

    // Q' from the product rule: Q' = beta'/V - (V'/V^2) beta,
    // with V'/V = (1/3) tr(beta^-1 beta').
    const SymMat3 beta_prime = sym_part(alpha_prime);
    const SymMat3 beta_inv = inverse_sym(beta);
    const double vp_over_v = mul(beta_inv, beta_prime).trace() / 3.0;
    const SymMat3 q_prime = beta_prime * (1.0 / s.V) - s.Q * vp_over_v;

    s.tau = q_prime.full() * (1.0 / s.V);

    const SymMat3 q_inv = inverse_sym(s.Q);
    const Mat3 m = mul(q_inv, q_prime);
    s.scalar_torsion = (m * m).trace() / (s.V * s.V);

    // Coordinate metric: g00 = det(alpha)/V, g0i = -(beta gamma)_i / V,
    // gij = beta_ij / V.
    const double inv_v = 1.0 / s.V;
    const Vec3 bg = beta * gvec;
    s.g[0] = alpha.det() * inv_v;
    for (int i = 0; i < 3; ++i) {
        s.g[i + 1] = -bg[i] * inv_v;
        s.g[4 * (i + 1)] = -bg[i] * inv_v;
        for (int j = 0; j < 3; ++j)
            s.g[4 * (i + 1) + (j + 1)] = beta(i, j) * inv_v;
    }
    return s;
}

std::array<double, 16> metric_from_coframe(const GeometrySample& s) {
    // g = V^2 th0 th0 + Q_ij th_i th_j with th_i = dx_i - gamma_i dx0.
    std::array<double, 16> g{};
    const Vec3 qg = s.Q * s.gamma_vec;
    g[0] = s.V * s.V + s.gamma_vec.dot(qg);
    for (int i = 0; i < 3; ++i) {
        g[i + 1] = -qg[i];
        g[4 * (i + 1)] = -qg[i];
        for (int j = 0; j < 3; ++j) g[4 * (i + 1) + (j + 1)] = s.Q(i, j);
    }
    return g;
}

std::pair<bool, double> is_hypersymplectic(const SymMat3Field& beta) {
    double margin = 0;
    for (int k = 0; k < beta.grid.n; ++k) {
        const double lo = eig_sym(beta.at(k)).values.x;
        margin = (k == 0) ? lo : std::fmin(margin, lo);
    }
    return {margin > 0, margin};
}

std::pair<bool, double> is_hypersymplectic(const Mat3Field& alpha) {
    return is_hypersymplectic(sym_part(alpha));
}

ScalarField invariant_laplacian(const ScalarField& f, const ScalarField& V,
                                Scheme scheme) {
    require_same_grid(f.grid, V.grid);
    if (V.min() <= 0)
        throw NotPositiveDefinite("invariant_laplacian: V must be positive");
    ScalarField t = deriv(f, 1, scheme);
    for (int k = 0; k < t.grid.n; ++k) t.v[k] /= V.v[k];
    ScalarField r = deriv(t, 1, scheme);
    for (int k = 0; k < r.grid.n; ++k) r.v[k] /= V.v[k];
    return r;
}

NormalForm normalize_triple(const InvariantTripleRaw& raw) {
    Mat3 w;  // columns: vec(eta_j)
    for (int j = 0; j < 3; ++j) {
        const Mat3& e = raw.eta[j];
        if ((e + e.transpose()).max_abs() != 0.0)
            throw ConstraintViolated("normalize_triple: eta is not exactly skew");
        const Vec3 v = skew_vec(e);
        for (int i = 0; i < 3; ++i) w(i, j) = v[i];
    }
    const double d = w.det();
    double scale = 1.0;
    for (int j = 0; j < 3; ++j)
        scale *= std::fmax(Vec3{w(0, j), w(1, j), w(2, j)}.norm(), 1e-300);
    if (std::fabs(d) <= 1e-12 * scale)
        throw NotAFrame("normalize_triple: the eta_i are not a frame");

    // Rows of A solve W a_i = e_i / 2, i.e. A = (1/2) (W^{-1})^T.
    Mat3 winv;
    {
        const Mat3& m = w;
        const double inv_d = 1.0 / d;
        winv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) * inv_d;
        winv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) * inv_d;
        winv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) * inv_d;
        winv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) * inv_d;
        winv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) * inv_d;
        winv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) * inv_d;
        winv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) * inv_d;
        winv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) * inv_d;
        winv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) * inv_d;
    }
    NormalForm nf;
    nf.A = winv.transpose() * 0.5;
    nf.alpha = Mat3Field(raw.a.grid);
    for (int k = 0; k < raw.a.grid.n; ++k) nf.alpha.set(k, nf.A * raw.a.at(k));
    return nf;
}

G2Export export_g2(const GeometrySample& s) {
    G2Export e;
    // alpha = V Q + skew(gamma)
    const Mat3 alpha = assemble(s.Q * s.V, s.gamma_vec);

    e.phi.push_back({{0, 1, 2}, 1.0});  // dt123
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            e.phi.push_back({{i, 3, 4 + j}, -alpha(i, j)});
    // -dt^i ^ (1/2) eps_ipq dx_pq: component -eps_ipq on increasing (p,q)
    e.phi.push_back({{0, 5, 6}, -1.0});  // i=1, dx23
    e.phi.push_back({{1, 4, 6}, +1.0});  // i=2, dx13 (eps_213 = -1)
    e.phi.push_back({{2, 4, 5}, -1.0});  // i=3, dx12

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e.g7[7 * i + j] = s.Q(i, j);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) e.g7[7 * (3 + i) + (3 + j)] = s.g[4 * i + j];
    return e;
}

}  // namespace hsflow
