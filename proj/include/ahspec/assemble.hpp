#pragma once

#include "ahspec/operators.hpp"

namespace ahspec {

// One Fourier mode of a rotationally symmetric operator, reduced to a matrix
// on interior radial coefficients (walls carry zero Dirichlet data and are
// eliminated).  Coefficient layout, with c = cos(m theta), s = sin(m theta)
// (both replaced by 1 when m = 0):
//   rank 0:             f        = v(t) c
//   rank 1:             omega    = (v_t(t) c, v_q(t) s)
//   rank 2, trace-free: u_tt     = v_a(t) c, u_tq = v_b(t) s,
//                       u_qq     = -(B/A) v_a(t) c
// Blocks are stacked [v_t; v_q] resp. [v_a; v_b].
struct AssembledOperator {
    OpKind kind = OpKind::Identity;
    int mode = 0;
    int n_blocks = 1;
    int interior = 0; // interior radial nodes per block

    MatrixXd matrix;  // dim() x dim()
    VectorXd weight;  // diagonal discrete L2 weight for the coefficients

    // relative asymmetry of W * matrix, and the worst entry the banded
    // assembly discarded (both should sit at rounding level)
    double symmetry_defect = 0.0;
    double comb_leak = 0.0;

    int dim() const { return n_blocks * interior; }

    // W^{1/2} A W^{-1/2}, symmetrized; same spectrum as matrix
    MatrixXd symmetrized() const;
};

// tensor rank the operator acts on
int operator_rank(OpKind k);

AssembledOperator assemble_operator(const SurfaceModel& m, OpKind kind, int mode);

// expand per-mode interior coefficients to a full 2D field (zero walls), and
// project a 2D field back onto the mode
TensorField mode_lift(const SurfaceModel& m, OpKind kind, int mode, const VectorXd& coeff);
VectorXd mode_restrict(const SurfaceModel& m, OpKind kind, int mode, const TensorField& f);

// plain text COO export: "row,col,value" per line after a header
void write_matrix_coo(const std::string& path, const MatrixXd& A, double drop_tol = 0.0);

} // namespace ahspec
