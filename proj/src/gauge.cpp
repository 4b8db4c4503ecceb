#include "hsflow/gauge.hpp"

#include <algorithm>
#include <cmath>

namespace hsflow {

namespace {

// Fritsch-Carlson slopes: monotone cubic Hermite through strictly
// increasing data (non-uniform knots).
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
    const size_t n = x.size();
    std::vector<double> d(n - 1), m(n);
    for (size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0) {
            m[i] = 0;
        } else {
            const double w1 = 2 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
            const double w2 = (x[i + 1] - x[i]) + 2 * (x[i] - x[i - 1]);
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    return m;
}

}  // namespace

double GaugeMap::inverse_at(double y) const {
    double yy = std::fmod(y, two_pi);
    if (yy < 0) yy += two_pi;
    const auto it = std::upper_bound(knot_y.begin(), knot_y.end(), yy);
    size_t j = (it == knot_y.begin()) ? 0 : (it - knot_y.begin() - 1);
    if (j + 1 >= knot_y.size()) j = knot_y.size() - 2;
    const double hh = knot_y[j + 1] - knot_y[j];
    const double u = (yy - knot_y[j]) / hh;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * knot_x[j] + (u3 - 2 * u2 + u) * hh * slope[j] +
           (-2 * u3 + 3 * u2) * knot_x[j + 1] + (u3 - u2) * hh * slope[j + 1];
}

GaugeMap build_gauge(const ScalarField& v_field) {
    if (v_field.min() <= 0)
        throw NotPositiveDefinite("build_gauge: V must be positive");

    GaugeMap g;
    g.v = integrate(v_field);
    ScalarField prim = antiderivative(v_field);
    g.y_of_x = ScalarField(v_field.grid);
    const double scale = two_pi / g.v;
    for (int k = 0; k < v_field.grid.n; ++k) g.y_of_x.v[k] = scale * prim.v[k];
    g.y_of_x.v[0] = 0.0;

    const int n = v_field.grid.n;
    g.knot_y.resize(n + 1);
    g.knot_x.resize(n + 1);
    for (int k = 0; k < n; ++k) {
        g.knot_y[k] = g.y_of_x.v[k];
        g.knot_x[k] = v_field.grid.node(k);
    }
    g.knot_y[n] = two_pi;
    g.knot_x[n] = two_pi;
    for (int k = 0; k < n; ++k)
        if (g.knot_y[k + 1] <= g.knot_y[k])
            throw NonMonotone("build_gauge: y(x0) is not strictly increasing");
    g.slope = pchip_slopes(g.knot_y, g.knot_x);
    return g;
}

SymMat3Field resample_hat(const SymMat3Field& q, const GaugeMap& gauge, int m) {
    if (q.grid.n != gauge.y_of_x.grid.n)
        throw GridMismatch("resample_hat: Q and gauge live on different grids");
    const CircleGrid out_grid(m);
    std::vector<double> targets(m);
    for (int j = 0; j < m; ++j) targets[j] = gauge.inverse_at(out_grid.node(j));

    SymMat3Field qhat(out_grid);
    for (int ch = 0; ch < 6; ++ch) {
        ScalarField f(q.grid);
        f.v = q.c[ch];
        const std::vector<double> vals = interpolate(f, targets, InterpKind::trig);
        qhat.c[ch] = vals;
    }
    for (int j = 0; j < m; ++j)
        if (std::fabs(qhat.at(j).det() - 1.0) > 1e-10)
            throw ConstraintViolated("resample_hat: det Qhat deviates from 1");
    return qhat;
}

LimitPrediction limit_prediction(const Mat3Field& alpha0) {
    const SymMat3Field beta0 = sym_part(alpha0);
    const SymMat3 abar = integrate(beta0) * (1.0 / two_pi);
    if (!is_positive_definite(abar))
        throw NotPositiveDefinite("limit_prediction: mean coefficient matrix not SPD");
    const double d = abar.det();
    LimitPrediction p;
    p.v_inf = two_pi * std::cbrt(d);
    p.qhat_inf = abar * (1.0 / std::cbrt(d));
    return p;
}

ConvergenceReport convergence_report(const SymMat3Field& qhat,
                                     const LimitPrediction& pred, double v) {
    ConvergenceReport r;
    for (int k = 0; k < qhat.grid.n; ++k)
        r.dist_inf = std::fmax(r.dist_inf, (qhat.at(k) - pred.qhat_inf).max_abs());
    r.q_prime_inf = deriv(qhat, 1, Scheme::spectral).max_abs();
    r.v_gap = std::fabs(v - pred.v_inf);
    return r;
}

}  // namespace hsflow
