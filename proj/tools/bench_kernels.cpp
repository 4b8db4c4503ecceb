// Times the OpenMP kernels against the serial reference implementations
// over a range of grid sizes.  The two paths must agree bit-for-bit; this
// tool reports throughput, the test suite asserts equality.

#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hsflow/kernels.hpp"

using namespace hsflow;

namespace {

SymMat3Field test_field(int n) {
    return SymMat3Field::sample(CircleGrid(n), [](double x) {
        SymMat3 b = SymMat3::diag(1.0 + 0.5 * std::cos(x), 1.0 + 0.2 * std::sin(x),
                                  1.0);
        b.s12 = 0.1 * std::sin(2 * x);
        b.s13 = 0.05 * std::cos(3 * x);
        return b;
    });
}

template <class F>
double time_ms(F&& f, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled\n");
#endif
    std::printf("%-18s %8s %12s %12s %9s\n", "kernel", "n", "serial ms",
                "parallel ms", "speedup");

    for (int n : {256, 1024, 4096, 16384, 65536}) {
        const SymMat3Field beta = test_field(n);
        const int reps = n <= 4096 ? 200 : 20;

        const double t_ref =
            time_ms([&] { (void)ref::rhs_core(beta, Scheme::fd4); }, reps);
        const double t_par =
            time_ms([&] { (void)rhs_core(beta, Scheme::fd4); }, reps);
        std::printf("%-18s %8d %12.4f %12.4f %8.2fx\n", "rhs(fd4)", n, t_ref,
                    t_par, t_ref / t_par);

        const double tr2 =
            time_ms([&] { (void)ref::torsion_field(beta, Scheme::fd4); }, reps);
        const double tp2 =
            time_ms([&] { (void)torsion_field(beta, Scheme::fd4); }, reps);
        std::printf("%-18s %8d %12.4f %12.4f %8.2fx\n", "torsion(fd4)", n, tr2,
                    tp2, tr2 / tp2);

        ScalarField v1, v2;
        SymMat3Field q1, q2;
        const double tr3 = time_ms([&] { ref::v_q_fields(beta, v1, q1); }, reps);
        const double tp3 = time_ms([&] { v_q_fields(beta, v2, q2); }, reps);
        std::printf("%-18s %8d %12.4f %12.4f %8.2fx\n", "v_q_fields", n, tr3, tp3,
                    tr3 / tp3);
    }
    return 0;
}
