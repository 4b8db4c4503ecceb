#pragma once

// Pointwise derived geometry of a triple in normal form: volume factor V,
// det-normalized matrix Q, the 4-metric in coordinates and in the adapted
// coframe, torsion 1-forms, scalar torsion, plus the normal-form reduction
// of a raw invariant triple and the 7-dimensional export.

#include <array>
#include <utility>
#include <vector>

#include "hsflow/deriv.hpp"
#include "hsflow/grid.hpp"
#include "hsflow/mat3.hpp"

namespace hsflow {

struct GeometrySample {
    double V = 0;               // (det beta)^{1/3}
    SymMat3 Q;                  // V^{-1} beta, det = 1
    Vec3 gamma_vec;             // coframe shifts (g23, g31, g12)
    std::array<double, 16> g{};  // 4x4 metric, coordinates (x0,x1,x2,x3), row-major
    Mat3 tau;                   // row i: coefficients of tau_i in the coframe
    double scalar_torsion = 0;  // V^{-2} tr((Q^{-1}Q')^2), >= 0
    double mu = 0;              // coefficient of the volume form V dx0123
};

// Derived geometry at one point from alpha and its x0-derivative.  The
// caller differentiates the field once and picks the scheme; this layer
// stays grid-agnostic.  Throws NotPositiveDefinite when sym(alpha) is not.
GeometrySample geometry_at(const Mat3& alpha, const Mat3& alpha_prime);

// Metric assembled from the coframe expression V^2 th0^2 + Q_ij th_i th_j
// instead of the coordinate formula; the two agree exactly when
// det(alpha) = det(beta) + gamma^T beta gamma does.
std::array<double, 16> metric_from_coframe(const GeometrySample& s);

// ok iff sym(alpha) is positive definite at every node; margin is the
// minimum eigenvalue over the grid.
std::pair<bool, double> is_hypersymplectic(const Mat3Field& alpha);
std::pair<bool, double> is_hypersymplectic(const SymMat3Field& beta);

// Laplacian of an invariant function: V^{-1}(V^{-1} f')'.
ScalarField invariant_laplacian(const ScalarField& f, const ScalarField& V,
                                Scheme scheme = Scheme::spectral);

// A T^3-invariant closed triple before normalization: coefficient 1-form
// rows a_i(x0) and the constant skew 2-form parts eta_i.
struct InvariantTripleRaw {
    Mat3Field a;                // row i: coefficients of dx0 ^ dx_j in omega_i
    std::array<Mat3, 3> eta;    // constant skew matrices
};

struct NormalForm {
    Mat3 A;          // constant transformation, A_ij eta_j = standard
    Mat3Field alpha; // coefficient field of the transformed triple
};

// Solves for the unique A taking the eta frame to the standard one and
// applies it to the coefficient rows.  Throws NotAFrame when the eta_i are
// linearly dependent and ConstraintViolated when an eta is not skew.
NormalForm normalize_triple(const InvariantTripleRaw& raw);

// One coordinate-basis component of a 3-form on T^3 x T^4; indices are
// strictly increasing over the coordinate order (t1,t2,t3,x0,x1,x2,x3).
struct PhiComponent {
    std::array<int, 3> idx;
    double coeff;
};

struct G2Export {
    std::vector<PhiComponent> phi;
    std::array<double, 49> g7{};  // blockdiag(Q, g), row-major 7x7
};

G2Export export_g2(const GeometrySample& s);

}  // namespace hsflow
