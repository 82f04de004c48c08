#pragma once

#include "ahspec/assemble.hpp"

namespace ahspec {

// Hodge splitting omega = d u + *d v + eta on the truncated band, with zero
// Dirichlet data for the two potentials; eta collects the harmonic content
// (plus whatever the boundary truncation leaves behind).
struct OneFormDecomposition {
    TensorField exact;    // d u
    TensorField coexact;  // *d v
    TensorField harmonic; // remainder
    double exact_norm = 0.0;
    double coexact_norm = 0.0;
    double harmonic_norm = 0.0;
    // largest pairwise L2 cross term between the three pieces
    double cross_max = 0.0;
    std::string summary_json() const;
};

OneFormDecomposition hodge_decompose(const SurfaceModel& m, const TensorField& omega);

// h = tt + L-ring(xi) with div(tt) ~ 0; xi solves the coercive one-form
// problem (1/2)(Delta - R/2) xi = div h with zero Dirichlet data.
struct TTSplit {
    TensorField tt;
    TensorField lring; // L-ring xi
    TensorField xi;
    double div_residual = 0.0; // |div tt|_L2 / |div h|_L2
    double coercivity = 0.0;   // smallest eigenvalue among the solved modes
    double cross = 0.0;        // <tt, L-ring xi> / (|tt| |L-ring xi|)
    std::string summary_json() const;
};

TTSplit tt_project(const SurfaceModel& m, const TensorField& h, int max_mode = -1);

// mode-by-mode Dirichlet solves A_m x = rhs used by the decompositions;
// exposed for direct use (kind selects the operator family)
TensorField solve_scalar_poisson(const SurfaceModel& m, const TensorField& rhs);
TensorField solve_oneform(const SurfaceModel& m, OpKind kind, const TensorField& rhs,
                          int max_mode, double* coercivity_out);

} // namespace ahspec
