#pragma once

#include "ahspec/field.hpp"

namespace ahspec {

enum class OpKind {
    RoughLaplacian,
    HodgeLaplacian,
    Lichnerowicz,
    DeltaK,
    ScalarLaplacian,
    DivLRing, // (1/2)(Delta - R/2) on one forms, the div(L-ring) operator
    Identity,
};

const char* op_kind_name(OpKind k);

// Levi-Civita covariant derivative, rank p -> p+1 (p <= 3).
TensorField covariant_derivative(const SurfaceModel& m, const TensorField& u);

// Exact adjoint of covariant_derivative in the discrete weighted L2 products,
// rank p+1 -> p.  rough_laplacian(u) = covariant_derivative_adjoint(nabla u)
// is exactly self-adjoint in the discrete product.
TensorField covariant_derivative_adjoint(const SurfaceModel& m, const TensorField& v);

TensorField rough_laplacian(const SurfaceModel& m, const TensorField& u);

// Delta, Delta_H = Delta + R/2 (one forms), Delta_L = Delta + 2R and
// Delta_K = Delta + R (symmetric 2-tensors).  Lichnerowicz keeps trace-free
// inputs exactly trace-free.
TensorField laplacian(const SurfaceModel& m, OpKind kind, const TensorField& u);

// (div u)_i = -nabla^j u_{ji}
TensorField divergence(const SurfaceModel& m, const TensorField& u);

// (L omega)_{ij} = (nabla_i omega_j + nabla_j omega_i)/2
TensorField symmetrized_derivative(const SurfaceModel& m, const TensorField& w);

// L-ring: trace-free part, (L omega)_{ij} + (d* omega) g_{ij} / 2;
// trace vanishes identically by construction
TensorField conformal_killing(const SurfaceModel& m, const TensorField& w);

// (S-ring omega)_{ij} = omega_i omega_j - |omega|^2 g_{ij} / 2
TensorField traceless_square(const SurfaceModel& m, const TensorField& w);

// S-ring(dR, xi)_{ij} = (R_j xi_i + R_i xi_j - R_p xi^p g_{ij}) / 2
TensorField s_ring_gradientR(const SurfaceModel& m, const TensorField& xi);

// (d^nabla u)_{ijk} = nabla_i u_{jk} - nabla_j u_{ik}
TensorField exterior_d_nabla(const SurfaceModel& m, const TensorField& u);

// formal adjoint with the pair-counting convention:
// ((d^nabla)* v)_{jk} = -Sym_{jk} nabla^i v_{ijk}
TensorField codiff_d_nabla(const SurfaceModel& m, const TensorField& v);

// exterior derivative of a scalar (= covariant derivative)
TensorField exterior_d(const SurfaceModel& m, const TensorField& u);

// d* on one forms: exact weighted adjoint of d on scalars
TensorField codifferential(const SurfaceModel& m, const TensorField& w);
// cross-check route: -g^{ij} nabla_i omega_j
TensorField codifferential_direct(const SurfaceModel& m, const TensorField& w);

// Hodge star on one forms
TensorField hodge_star(const SurfaceModel& m, const TensorField& w);

// scalar *d(omega) of a one form
TensorField exterior_d_oneform(const SurfaceModel& m, const TensorField& w);

// pointwise multiply by a radial array (e.g. curvature terms)
TensorField scale_radial(const TensorField& u, const ArrayXd& s);

} // namespace ahspec
