#pragma once

// Fieldwise kernels of the flow engine and its audits.  The hot loops are
// data-parallel over grid nodes; the default implementations use OpenMP for
// the pointwise passes (transforms stay serial, they are tiny).  The ref
// namespace keeps plain serial loops of the same kernels; both paths must
// produce bit-identical output, which the test suite asserts.

#include "hsflow/deriv.hpp"
#include "hsflow/grid.hpp"

namespace hsflow {

// Volume factor V = (det beta)^{1/3} per node.  Throws NotPositiveDefinite
// when beta fails a Cholesky factorization anywhere.
ScalarField v_field(const SymMat3Field& beta);

// V and Q = beta / V in one pass.
void v_q_fields(const SymMat3Field& beta, ScalarField& v, SymMat3Field& q);

// Flow right-hand side (V^{-1} Q')' as an exactly symmetric field.
SymMat3Field rhs_core(const SymMat3Field& beta, Scheme scheme);

// Scalar torsion T = V^{-2} tr((Q^{-1} Q')^2) per node.
ScalarField torsion_field(const SymMat3Field& beta, Scheme scheme);

// Full right-hand side of the evolution equation satisfied by
// (d/dt - Laplacian) T, assembled from V, V', Q, Q', Q''.
ScalarField torsion_heat_rhs(const SymMat3Field& beta, Scheme scheme);

// max over nodes of ||Q'||_maxentry (the convergence monitor).
double q_prime_max(const SymMat3Field& beta, Scheme scheme);

namespace ref {
ScalarField v_field(const SymMat3Field& beta);
void v_q_fields(const SymMat3Field& beta, ScalarField& v, SymMat3Field& q);
SymMat3Field rhs_core(const SymMat3Field& beta, Scheme scheme);
ScalarField torsion_field(const SymMat3Field& beta, Scheme scheme);
}  // namespace ref

}  // namespace hsflow
