#include "hsflow/deriv.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

namespace hsflow {

namespace {

// One pair of real<->halfcomplex plans per grid size.  Plans are created
// with FFTW_UNALIGNED so the new-array execute functions accept any buffer;
// creation is serialized (FFTW planning is not thread-safe), execution is.
struct DftPlans {
    int n;
    fftw_plan fwd;
    fftw_plan bwd;

    explicit DftPlans(int size) : n(size) {
        std::vector<double> re(n);
        std::vector<std::complex<double>> sp(n / 2 + 1);
        auto* spc = reinterpret_cast<fftw_complex*>(sp.data());
        fwd = fftw_plan_dft_r2c_1d(n, re.data(), spc, FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd = fftw_plan_dft_c2r_1d(n, spc, re.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~DftPlans() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    DftPlans(const DftPlans&) = delete;
};

const DftPlans& plans_for(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<DftPlans>> cache;
    std::scoped_lock lock(mu);
    auto& p = cache[n];
    if (!p) p = std::make_unique<DftPlans>(n);
    return *p;
}

void spectrum(std::span<const double> in, std::vector<std::complex<double>>& sp,
              const DftPlans& p) {
    sp.resize(p.n / 2 + 1);
    fftw_execute_dft_r2c(p.fwd, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(sp.data()));
}

void inverse(std::vector<std::complex<double>>& sp, std::span<double> out,
             const DftPlans& p) {
    fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(sp.data()),
                         out.data());
}

void deriv_spectral(std::span<const double> in, std::span<double> out, int n,
                    int order) {
    const DftPlans& p = plans_for(n);
    std::vector<std::complex<double>> sp;
    spectrum(in, sp, p);
    const double scale = 1.0 / n;
    if (order == 1) {
        for (int k = 0; k <= n / 2; ++k) {
            const double w = (k == n / 2) ? 0.0 : k * scale;
            sp[k] = std::complex<double>(0.0, w) * sp[k];
        }
    } else {
        for (int k = 0; k <= n / 2; ++k)
            sp[k] *= -static_cast<double>(k) * k * scale;
    }
    inverse(sp, out, p);
}

void deriv_fd4(std::span<const double> f, std::span<double> out, int n, double h,
               int order) {
    auto wrap = [n](int i) { return (i % n + n) % n; };
    if (order == 1) {
        const double c = 1.0 / (12.0 * h);
        for (int i = 0; i < n; ++i)
            out[i] = c * (-f[wrap(i + 2)] + 8.0 * f[wrap(i + 1)] -
                          8.0 * f[wrap(i - 1)] + f[wrap(i - 2)]);
    } else {
        const double c = 1.0 / (12.0 * h * h);
        for (int i = 0; i < n; ++i)
            out[i] = c * (-f[wrap(i + 2)] + 16.0 * f[wrap(i + 1)] - 30.0 * f[i] +
                          16.0 * f[wrap(i - 1)] - f[wrap(i - 2)]);
    }
}

}  // namespace

void deriv_inplace(std::span<const double> in, std::span<double> out,
                   const CircleGrid& grid, int order, Scheme scheme) {
    if (static_cast<int>(in.size()) != grid.n ||
        static_cast<int>(out.size()) != grid.n)
        throw GridMismatch("deriv: sample count does not match grid");
    if (order != 1 && order != 2) throw Error("deriv: order must be 1 or 2");
    if (scheme == Scheme::spectral)
        deriv_spectral(in, out, grid.n, order);
    else
        deriv_fd4(in, out, grid.n, grid.h, order);
}

ScalarField deriv(const ScalarField& f, int order, Scheme scheme) {
    ScalarField d(f.grid);
    deriv_inplace(f.v, d.v, f.grid, order, scheme);
    return d;
}

SymMat3Field deriv(const SymMat3Field& f, int order, Scheme scheme) {
    SymMat3Field d(f.grid);
    for (int j = 0; j < 6; ++j) deriv_inplace(f.c[j], d.c[j], f.grid, order, scheme);
    return d;
}

Mat3Field deriv(const Mat3Field& f, int order, Scheme scheme) {
    Mat3Field d(f.grid);
    for (int j = 0; j < 9; ++j) deriv_inplace(f.c[j], d.c[j], f.grid, order, scheme);
    return d;
}

double integrate(const ScalarField& f) {
    double s = 0;
    for (double e : f.v) s += e;
    return s * f.grid.h;
}

SymMat3 integrate(const SymMat3Field& f) {
    SymMat3 r;
    for (int j = 0; j < 6; ++j) {
        double s = 0;
        for (double e : f.c[j]) s += e;
        r[j] = s * f.grid.h;
    }
    return r;
}

Mat3 integrate(const Mat3Field& f) {
    Mat3 r;
    for (int j = 0; j < 9; ++j) {
        double s = 0;
        for (double e : f.c[j]) s += e;
        r.m[j] = s * f.grid.h;
    }
    return r;
}

namespace {

double wrap_angle(double x) {
    double y = std::fmod(x, two_pi);
    if (y < 0) y += two_pi;
    return y;
}

std::vector<double> interp_trig(const ScalarField& f,
                                std::span<const double> targets) {
    const int n = f.grid.n;
    const DftPlans& p = plans_for(n);
    std::vector<std::complex<double>> sp;
    spectrum(f.v, sp, p);
    std::vector<double> out(targets.size());
    for (size_t t = 0; t < targets.size(); ++t) {
        const double x = targets[t];
        double acc = sp[0].real();
        for (int k = 1; k < n / 2; ++k)
            acc += 2.0 * (sp[k].real() * std::cos(k * x) -
                          sp[k].imag() * std::sin(k * x));
        acc += sp[n / 2].real() * std::cos((n / 2) * x);
        out[t] = acc / n;
    }
    return out;
}

std::vector<double> interp_cubic(const ScalarField& f,
                                 std::span<const double> targets) {
    const int n = f.grid.n;
    const double h = f.grid.h;
    auto wrap = [n](int i) { return (i % n + n) % n; };
    std::vector<double> out(targets.size());
    for (size_t t = 0; t < targets.size(); ++t) {
        const double x = wrap_angle(targets[t]);
        int j = static_cast<int>(std::floor(x / h));
        if (j >= n) j = n - 1;
        const double u = x / h - j;
        const double f0 = f.v[wrap(j)], f1 = f.v[wrap(j + 1)];
        const double m0 = 0.5 * (f.v[wrap(j + 1)] - f.v[wrap(j - 1)]);
        const double m1 = 0.5 * (f.v[wrap(j + 2)] - f.v[wrap(j)]);
        const double u2 = u * u, u3 = u2 * u;
        out[t] = (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * m0 +
                 (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * m1;
    }
    return out;
}

}  // namespace

std::vector<double> interpolate(const ScalarField& f,
                                std::span<const double> targets, InterpKind kind) {
    if (f.grid.n <= 0) throw GridMismatch("interpolate: empty field");
    return kind == InterpKind::trig ? interp_trig(f, targets)
                                    : interp_cubic(f, targets);
}

ScalarField antiderivative(const ScalarField& f) {
    const int n = f.grid.n;
    const DftPlans& p = plans_for(n);
    std::vector<std::complex<double>> sp;
    spectrum(f.v, sp, p);
    const double mean = sp[0].real() / n;
    sp[0] = 0.0;
    for (int k = 1; k <= n / 2; ++k) {
        if (k == n / 2)
            sp[k] = 0.0;  // Nyquist has no odd antiderivative on the grid
        else
            sp[k] /= std::complex<double>(0.0, static_cast<double>(k) * n);
    }
    ScalarField g(f.grid);
    inverse(sp, g.v, p);
    const double g0 = g.v[0];
    for (int k = 0; k < n; ++k) g.v[k] += mean * f.grid.node(k) - g0;
    return g;
}

ScalarField dealias_23(const ScalarField& f) {
    const int n = f.grid.n;
    const DftPlans& p = plans_for(n);
    std::vector<std::complex<double>> sp;
    spectrum(f.v, sp, p);
    const int kmax = n / 3;
    for (int k = 0; k <= n / 2; ++k)
        sp[k] = (k > kmax) ? 0.0 : sp[k] * (1.0 / n);
    ScalarField g(f.grid);
    inverse(sp, g.v, p);
    return g;
}

}  // namespace hsflow
