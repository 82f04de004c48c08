#include "ahspec/operators.hpp"

#include <cmath>

namespace ahspec {

namespace {

void check_shape(const SurfaceModel& m, const TensorField& u) {
    if (u.n_t() != m.chart().n_t() || u.n_theta() != m.chart().n_theta())
        throw UsageError("field does not conform to the model chart");
}

// Gamma^k_{i a} as a radial array (may be all zero)
const ArrayXd* gamma_array(const SurfaceModel& m, int k, int i, int a) {
    const ChristoffelField& g = m.christoffel();
    if (k == 0) {
        if (i == 0 && a == 0) return &g.t_tt;
        if (i == 1 && a == 1) return &g.t_qq;
        return nullptr;
    }
    return (i != a) ? &g.q_tq : nullptr;
}

// product over slots of g^{ss} for component c of a rank-p field
double contraction_factor(const SurfaceModel& m, int rank, int c, int i) {
    double f = 1.0;
    for (int s = 0; s < rank; ++s)
        f *= ((c >> s) & 1) ? 1.0 / m.metric_qq()[i] : 1.0 / m.metric_tt()[i];
    return f;
}

int slot_bit(int rank, int slot) { return rank - 1 - slot; }

} // namespace

const char* op_kind_name(OpKind k) {
    switch (k) {
        case OpKind::RoughLaplacian: return "rough_laplacian";
        case OpKind::HodgeLaplacian: return "hodge_laplacian";
        case OpKind::Lichnerowicz: return "lichnerowicz";
        case OpKind::DeltaK: return "delta_k";
        case OpKind::ScalarLaplacian: return "scalar_laplacian";
        case OpKind::DivLRing: return "div_lring";
        case OpKind::Identity: return "identity";
    }
    return "unknown";
}

TensorField covariant_derivative(const SurfaceModel& m, const TensorField& u) {
    check_shape(m, u);
    const int p = u.rank();
    if (p > 3) throw UsageError("covariant_derivative: rank > 3 unsupported");
    const GridChart& c = m.chart();
    TensorField out(p + 1, u.n_t(), u.n_theta());
    for (int i = 0; i < 2; ++i) {
        for (int alpha = 0; alpha < (1 << p); ++alpha) {
            MatrixXd M = (i == 0) ? c.ddt(u.comp(alpha)) : c.ddtheta(u.comp(alpha));
            for (int s = 0; s < p; ++s) {
                const int bit = slot_bit(p, s);
                const int a = (alpha >> bit) & 1;
                for (int k = 0; k < 2; ++k) {
                    const ArrayXd* g = gamma_array(m, k, i, a);
                    if (!g) continue;
                    const int beta = (alpha & ~(1 << bit)) | (k << bit);
                    for (int it = 0; it < u.n_t(); ++it)
                        M.row(it) -= (*g)[it] * u.comp(beta).row(it);
                }
            }
            out.comp((i << p) | alpha) = std::move(M);
        }
    }
    return out;
}

TensorField covariant_derivative_adjoint(const SurfaceModel& m, const TensorField& v) {
    check_shape(m, v);
    const int q = v.rank();
    if (q < 1 || q > 4) throw UsageError("covariant_derivative_adjoint: rank out of range");
    const int p = q - 1;
    const GridChart& c = m.chart();

    // w = M v (radial weight times metric contraction factors)
    TensorField w(q, v.n_t(), v.n_theta());
    for (int cc = 0; cc < v.n_comp(); ++cc)
        for (int it = 0; it < v.n_t(); ++it)
            w.comp(cc).row(it) =
                m.weight()[it] * contraction_factor(m, q, cc, it) * v.comp(cc).row(it);

    TensorField out(p, v.n_t(), v.n_theta());
    for (int alpha = 0; alpha < (1 << p); ++alpha) {
        // derivative transposes
        MatrixXd Z = c.ddt_transpose(w.comp((0 << p) | alpha));
        Z -= c.ddtheta(w.comp((1 << p) | alpha)); // D_theta^T = -D_theta
        // Christoffel transpose: sum_i sum_s sum_j Gamma^{alpha_s}_{i j} w_{i, alpha[s->j]}
        for (int i = 0; i < 2; ++i)
            for (int s = 0; s < p; ++s) {
                const int bit = slot_bit(p, s);
                const int as = (alpha >> bit) & 1;
                for (int j = 0; j < 2; ++j) {
                    const ArrayXd* g = gamma_array(m, as, i, j);
                    if (!g) continue;
                    const int beta = (alpha & ~(1 << bit)) | (j << bit);
                    const MatrixXd& wc = w.comp((i << p) | beta);
                    for (int it = 0; it < v.n_t(); ++it)
                        Z.row(it) -= (*g)[it] * wc.row(it);
                }
            }
        for (int it = 0; it < v.n_t(); ++it)
            Z.row(it) /= m.weight()[it] * contraction_factor(m, p, alpha, it);
        out.comp(alpha) = std::move(Z);
    }
    return out;
}

// nabla* nabla with a staggered radial leg: the t-derivative lives on half
// nodes, so the composed operator has a compact 3-point radial stencil (the
// centered-difference composition is wide and leaves the sawtooth mode nearly
// in its kernel, which poisons solves and eigenproblems).  Half-node
// Christoffels are built from the metric increments, so nabla g = 0 stays
// exact.  The operator is exactly self-adjoint in the weighted product.
TensorField rough_laplacian(const SurfaceModel& m, const TensorField& u) {
    check_shape(m, u);
    const int p = u.rank();
    if (p > 3) throw UsageError("rough_laplacian: rank > 3 unsupported");
    const GridChart& c = m.chart();
    const int nt = u.n_t();
    const int nh = nt - 1;
    const double h = c.h_t();
    const ArrayXd& A = m.metric_tt();
    const ArrayXd& B = m.metric_qq();

    // half-node metric, weight (with g^tt folded in) and Christoffels
    ArrayXd Ah(nh), Bh(nh), wh(nh), gh_t_tt(nh), gh_t_qq(nh), gh_q_tq(nh);
    for (int k = 0; k < nh; ++k) {
        Ah[k] = 0.5 * (A[k] + A[k + 1]);
        Bh[k] = 0.5 * (B[k] + B[k + 1]);
        const double dA = (A[k + 1] - A[k]) / h;
        const double dB = (B[k + 1] - B[k]) / h;
        gh_t_tt[k] = dA / (2.0 * Ah[k]);
        gh_t_qq[k] = -dB / (2.0 * Ah[k]);
        gh_q_tq[k] = dB / (2.0 * Bh[k]);
        wh[k] = h * std::sqrt(Ah[k] * Bh[k]) / Ah[k];
    }
    auto gamma_half = [&](int k, int a) -> const ArrayXd* {
        // Gamma^k_{t a} at half nodes
        if (k == 0) return (a == 0) ? &gh_t_tt : nullptr;
        return (a == 1) ? &gh_q_tq : nullptr;
    };
    auto cf_half = [&](int alpha, int k) {
        double f = 1.0;
        for (int s = 0; s < p; ++s)
            f *= ((alpha >> s) & 1) ? 1.0 / Bh[k] : 1.0 / Ah[k];
        return f;
    };

    const int nc = 1 << p;
    // weighted radial fluxes X_alpha at half nodes
    std::vector<MatrixXd> X(nc);
    for (int alpha = 0; alpha < nc; ++alpha) {
        MatrixXd G = (u.comp(alpha).bottomRows(nh) - u.comp(alpha).topRows(nh)) / h;
        for (int s = 0; s < p; ++s) {
            const int bit = slot_bit(p, s);
            const int a = (alpha >> bit) & 1;
            for (int k = 0; k < 2; ++k) {
                const ArrayXd* g = gamma_half(k, a);
                if (!g) continue;
                const int beta = (alpha & ~(1 << bit)) | (k << bit);
                const MatrixXd& ub = u.comp(beta);
                for (int it = 0; it < nh; ++it)
                    G.row(it) -= (*g)[it] * 0.5 * (ub.row(it) + ub.row(it + 1));
            }
        }
        for (int it = 0; it < nh; ++it)
            G.row(it) *= wh[it] * cf_half(alpha, it);
        X[alpha] = std::move(G);
    }

    TensorField out(p, u.n_t(), u.n_theta());
    for (int alpha = 0; alpha < nc; ++alpha) {
        MatrixXd Z = MatrixXd::Zero(nt, u.n_theta());
        // difference part of the exact transpose: (X_{i-1/2} - X_{i+1/2}) / h
        Z.topRows(nh) -= X[alpha] / h;
        Z.bottomRows(nh) += X[alpha] / h;
        // Christoffel transpose with the averaging stencil
        for (int s = 0; s < p; ++s) {
            const int bit = slot_bit(p, s);
            const int as = (alpha >> bit) & 1;
            for (int j = 0; j < 2; ++j) {
                const ArrayXd* g = gamma_half(as, j);
                if (!g) continue;
                const int beta = (alpha & ~(1 << bit)) | (j << bit);
                for (int it = 0; it < nh; ++it) {
                    Z.row(it) -= 0.5 * (*g)[it] * X[beta].row(it);
                    Z.row(it + 1) -= 0.5 * (*g)[it] * X[beta].row(it);
                }
            }
        }

        // theta leg: v = D_theta u - Gamma u at the nodes, then its transpose
        MatrixXd V = c.ddtheta(u.comp(alpha));
        for (int s = 0; s < p; ++s) {
            const int bit = slot_bit(p, s);
            const int a = (alpha >> bit) & 1;
            for (int k = 0; k < 2; ++k) {
                const ArrayXd* g = gamma_array(m, k, 1, a);
                if (!g) continue;
                const int beta = (alpha & ~(1 << bit)) | (k << bit);
                for (int it = 0; it < nt; ++it)
                    V.row(it) -= (*g)[it] * u.comp(beta).row(it);
            }
        }
        for (int it = 0; it < nt; ++it)
            V.row(it) *= m.weight()[it] / B[it] * contraction_factor(m, p, alpha, it);
        Z -= c.ddtheta(V); // D_theta^T = -D_theta
        for (int s = 0; s < p; ++s) {
            const int bit = slot_bit(p, s);
            const int as = (alpha >> bit) & 1;
            for (int j = 0; j < 2; ++j) {
                const ArrayXd* g = gamma_array(m, as, 1, j);
                if (!g) continue;
                const int beta = (alpha & ~(1 << bit)) | (j << bit);
                MatrixXd Vb = c.ddtheta(u.comp(beta));
                for (int s2 = 0; s2 < p; ++s2) {
                    const int bit2 = slot_bit(p, s2);
                    const int a2 = (beta >> bit2) & 1;
                    for (int k2 = 0; k2 < 2; ++k2) {
                        const ArrayXd* g2 = gamma_array(m, k2, 1, a2);
                        if (!g2) continue;
                        const int gamma_i = (beta & ~(1 << bit2)) | (k2 << bit2);
                        for (int it = 0; it < nt; ++it)
                            Vb.row(it) -= (*g2)[it] * u.comp(gamma_i).row(it);
                    }
                }
                for (int it = 0; it < nt; ++it)
                    Z.row(it) -= (*g)[it] * m.weight()[it] / B[it] *
                                 contraction_factor(m, p, beta, it) * Vb.row(it);
            }
        }

        for (int it = 0; it < nt; ++it)
            Z.row(it) /= m.weight()[it] * contraction_factor(m, p, alpha, it);
        out.comp(alpha) = std::move(Z);
    }
    return out;
}

TensorField scale_radial(const TensorField& u, const ArrayXd& s) {
    TensorField out = u;
    for (int c = 0; c < u.n_comp(); ++c)
        for (int it = 0; it < u.n_t(); ++it)
            out.comp(c).row(it) *= s[it];
    return out;
}

TensorField laplacian(const SurfaceModel& m, OpKind kind, const TensorField& u) {
    check_shape(m, u);
    switch (kind) {
        case OpKind::Identity:
            return u;
        case OpKind::ScalarLaplacian:
            if (u.rank() != 0) throw UsageError("scalar laplacian: scalar field expected");
            return rough_laplacian(m, u);
        case OpKind::RoughLaplacian:
            return rough_laplacian(m, u);
        case OpKind::HodgeLaplacian: {
            if (u.rank() != 1) throw UsageError("hodge laplacian: one form expected");
            TensorField out = rough_laplacian(m, u);
            out += scale_radial(u, 0.5 * m.scalar_curvature());
            return out;
        }
        case OpKind::DivLRing: {
            if (u.rank() != 1) throw UsageError("div_lring: one form expected");
            TensorField out = rough_laplacian(m, u);
            out -= scale_radial(u, 0.5 * m.scalar_curvature());
            out *= 0.5;
            return out;
        }
        case OpKind::DeltaK: {
            if (u.rank() != 2) throw UsageError("delta_k: symmetric 2-tensor expected");
            TensorField out = rough_laplacian(m, u);
            out += scale_radial(u, m.scalar_curvature());
            return out;
        }
        case OpKind::Lichnerowicz: {
            if (u.rank() != 2) throw UsageError("lichnerowicz: symmetric 2-tensor expected");
            TensorField out = rough_laplacian(m, u);
            out += scale_radial(u, 2.0 * m.scalar_curvature());
            if (u.tracefree()) out = restrict_tracefree(m, out);
            return out;
        }
    }
    throw UsageError("laplacian: unknown kind");
}

TensorField divergence(const SurfaceModel& m, const TensorField& u) {
    check_shape(m, u);
    if (u.rank() != 2) throw UsageError("divergence: rank-2 field expected");
    const TensorField du = covariant_derivative(m, u); // (nabla u)_{k j i}, comp 4k+2j+i
    TensorField out(1, u.n_t(), u.n_theta());
    for (int i = 0; i < 2; ++i) {
        MatrixXd M = MatrixXd::Zero(u.n_t(), u.n_theta());
        for (int j = 0; j < 2; ++j) {
            const MatrixXd& T = du.comp(4 * j + 2 * j + i);
            for (int it = 0; it < u.n_t(); ++it) {
                const double ginv = (j == 0) ? 1.0 / m.metric_tt()[it] : 1.0 / m.metric_qq()[it];
                M.row(it) -= ginv * T.row(it);
            }
        }
        out.comp(i) = std::move(M);
    }
    return out;
}

TensorField symmetrized_derivative(const SurfaceModel& m, const TensorField& w) {
    check_shape(m, w);
    if (w.rank() != 1) throw UsageError("symmetrized_derivative: one form expected");
    const TensorField dw = covariant_derivative(m, w); // comp 2i+j = nabla_i w_j
    TensorField out(2, w.n_t(), w.n_theta());
    out.comp(0) = dw.comp(0);
    out.comp(1) = 0.5 * (dw.comp(1) + dw.comp(2));
    out.comp(2) = out.comp(1);
    out.comp(3) = dw.comp(3);
    return out;
}

TensorField codifferential_direct(const SurfaceModel& m, const TensorField& w) {
    check_shape(m, w);
    if (w.rank() != 1) throw UsageError("codifferential: one form expected");
    const TensorField dw = covariant_derivative(m, w);
    TensorField out(0, w.n_t(), w.n_theta());
    for (int it = 0; it < w.n_t(); ++it)
        out.comp(0).row(it) = -dw.comp(0).row(it) / m.metric_tt()[it] -
                              dw.comp(3).row(it) / m.metric_qq()[it];
    return out;
}

TensorField conformal_killing(const SurfaceModel& m, const TensorField& w) {
    TensorField out = symmetrized_derivative(m, w);
    const TensorField dstar = codifferential_direct(m, w);
    for (int it = 0; it < w.n_t(); ++it) {
        out.comp(0).row(it) += 0.5 * m.metric_tt()[it] * dstar.comp(0).row(it);
        out.comp(3).row(it) += 0.5 * m.metric_qq()[it] * dstar.comp(0).row(it);
    }
    out.set_tracefree(true);
    return out;
}

TensorField traceless_square(const SurfaceModel& m, const TensorField& w) {
    check_shape(m, w);
    if (w.rank() != 1) throw UsageError("traceless_square: one form expected");
    TensorField out(2, w.n_t(), w.n_theta());
    const MatrixXd norm2 = pointwise_dot(m, w, w);
    out.comp(0) = w.comp(0).cwiseProduct(w.comp(0));
    out.comp(1) = w.comp(0).cwiseProduct(w.comp(1));
    out.comp(2) = out.comp(1);
    out.comp(3) = w.comp(1).cwiseProduct(w.comp(1));
    for (int it = 0; it < w.n_t(); ++it) {
        out.comp(0).row(it) -= 0.5 * m.metric_tt()[it] * norm2.row(it);
        out.comp(3).row(it) -= 0.5 * m.metric_qq()[it] * norm2.row(it);
    }
    out.set_tracefree(true);
    return out;
}

TensorField s_ring_gradientR(const SurfaceModel& m, const TensorField& xi) {
    check_shape(m, xi);
    if (xi.rank() != 1) throw UsageError("s_ring_gradientR: one form expected");
    TensorField out(2, xi.n_t(), xi.n_theta());
    // dR = (R'(t), 0) on rotationally symmetric models
    const ArrayXd& Rp = m.scalar_curvature_d();
    for (int it = 0; it < xi.n_t(); ++it) {
        const double rp = Rp[it];
        // nabla_p R xi^p = R' xi_t / A
        const auto dot = (rp / m.metric_tt()[it]) * xi.comp(0).row(it);
        out.comp(0).row(it) = rp * xi.comp(0).row(it) - 0.5 * m.metric_tt()[it] * dot;
        out.comp(1).row(it) = 0.5 * rp * xi.comp(1).row(it);
        out.comp(3).row(it) = -0.5 * m.metric_qq()[it] * dot;
    }
    out.comp(2) = out.comp(1);
    out.set_tracefree(true);
    return out;
}

TensorField exterior_d_nabla(const SurfaceModel& m, const TensorField& u) {
    check_shape(m, u);
    if (u.rank() != 2) throw UsageError("exterior_d_nabla: rank-2 field expected");
    const TensorField du = covariant_derivative(m, u); // comp 4i+2j+k = nabla_i u_{jk}
    TensorField out(3, u.n_t(), u.n_theta());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                out.comp(4 * i + 2 * j + k) =
                    du.comp(4 * i + 2 * j + k) - du.comp(4 * j + 2 * i + k);
    return out;
}

TensorField codiff_d_nabla(const SurfaceModel& m, const TensorField& v) {
    check_shape(m, v);
    if (v.rank() != 3) throw UsageError("codiff_d_nabla: rank-3 field expected");
    const TensorField dv = covariant_derivative(m, v); // comp 8l+4i+2j+k = nabla_l v_{ijk}
    TensorField out(2, v.n_t(), v.n_theta());
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            MatrixXd M = MatrixXd::Zero(v.n_t(), v.n_theta());
            for (int i = 0; i < 2; ++i) {
                const MatrixXd& Tjk = dv.comp(8 * i + 4 * i + 2 * j + k);
                const MatrixXd& Tkj = dv.comp(8 * i + 4 * i + 2 * k + j);
                for (int it = 0; it < v.n_t(); ++it) {
                    const double ginv =
                        (i == 0) ? 1.0 / m.metric_tt()[it] : 1.0 / m.metric_qq()[it];
                    M.row(it) -= 0.5 * ginv * (Tjk.row(it) + Tkj.row(it));
                }
            }
            out.comp(2 * j + k) = std::move(M);
        }
    return out;
}

TensorField exterior_d(const SurfaceModel& m, const TensorField& u) {
    check_shape(m, u);
    if (u.rank() != 0) throw UsageError("exterior_d: scalar field expected");
    return covariant_derivative(m, u);
}

TensorField codifferential(const SurfaceModel& m, const TensorField& w) {
    check_shape(m, w);
    if (w.rank() != 1) throw UsageError("codifferential: one form expected");
    return covariant_derivative_adjoint(m, w);
}

TensorField hodge_star(const SurfaceModel& m, const TensorField& w) {
    check_shape(m, w);
    if (w.rank() != 1) throw UsageError("hodge_star: one form expected");
    TensorField out(1, w.n_t(), w.n_theta());
    for (int it = 0; it < w.n_t(); ++it) {
        const double s = m.sqrtdet()[it];
        out.comp(0).row(it) = -(s / m.metric_qq()[it]) * w.comp(1).row(it);
        out.comp(1).row(it) = (s / m.metric_tt()[it]) * w.comp(0).row(it);
    }
    return out;
}

TensorField exterior_d_oneform(const SurfaceModel& m, const TensorField& w) {
    check_shape(m, w);
    if (w.rank() != 1) throw UsageError("exterior_d_oneform: one form expected");
    const GridChart& c = m.chart();
    TensorField out(0, w.n_t(), w.n_theta());
    MatrixXd d = c.ddt(w.comp(1)) - c.ddtheta(w.comp(0));
    for (int it = 0; it < w.n_t(); ++it)
        out.comp(0).row(it) = d.row(it) / m.sqrtdet()[it];
    return out;
}

NormReport norms(const SurfaceModel& m, const TensorField& a) {
    NormReport r;
    r.l2 = l2_norm(m, a);
    const TensorField da = covariant_derivative(m, a);
    r.h1 = std::sqrt(r.l2 * r.l2 + l2_inner_product(m, da, da));
    r.l4 = l4_norm(m, a);
    return r;
}

} // namespace ahspec
