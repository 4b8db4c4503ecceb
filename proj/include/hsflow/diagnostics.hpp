#pragma once

// Per-time monitors collected along a run.  Everything here is derived data;
// the checks that consume it live in audit.hpp.

#include "hsflow/mat3.hpp"

namespace hsflow {

struct DiagnosticsRecord {
    double t = 0;
    double v = 0;               // integral of V over the circle
    double torsion_max = 0;     // max over nodes of the scalar torsion
    SymMat3 cohom;              // per-component integral of sym(alpha)
    double trQ_max = 0;
    double detQ_err_max = 0;    // max |det Q - 1|
    double skew_drift_max = 0;  // max |gamma - gamma(0)|
    double min_eig_beta = 0;
    double volume_bound = 0;    // (1/3) integral of tr alpha(.,0)
    double eig_lo = 0;          // extremal eigenvalues of Q over nodes
    double eig_hi = 0;
};

}  // namespace hsflow
