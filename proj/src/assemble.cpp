#include "ahspec/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace ahspec {

namespace {

struct ModeShape {
    int rank;
    int n_blocks;
};

ModeShape shape_of(OpKind k) {
    switch (k) {
        case OpKind::ScalarLaplacian: return {0, 1};
        case OpKind::HodgeLaplacian:
        case OpKind::DivLRing: return {1, 2};
        case OpKind::Lichnerowicz:
        case OpKind::Identity: return {2, 2}; // identity fixture on trace-free pairs
        default: break;
    }
    throw UsageError("assemble: unsupported operator kind");
}

void check_mode(const SurfaceModel& m, int mode) {
    if (mode < 0 || 2 * mode >= m.chart().n_theta())
        throw UsageError("assemble: Fourier mode out of range for the theta grid");
}

// cos / sin profiles of the mode (both constant 1 for m = 0)
void mode_profiles(const GridChart& c, int mode, Eigen::RowVectorXd& cth,
                   Eigen::RowVectorXd& sth) {
    cth.resize(c.n_theta());
    sth.resize(c.n_theta());
    for (int j = 0; j < c.n_theta(); ++j) {
        cth[j] = (mode == 0) ? 1.0 : std::cos(mode * c.theta()[j]);
        sth[j] = (mode == 0) ? 1.0 : std::sin(mode * c.theta()[j]);
    }
}

} // namespace

int operator_rank(OpKind k) {
    switch (k) {
        case OpKind::ScalarLaplacian: return 0;
        case OpKind::HodgeLaplacian:
        case OpKind::DivLRing: return 1;
        case OpKind::Lichnerowicz:
        case OpKind::DeltaK: return 2;
        default: break;
    }
    return -1; // acts on any rank
}

TensorField mode_lift(const SurfaceModel& m, OpKind kind, int mode, const VectorXd& coeff) {
    check_mode(m, mode);
    const ModeShape s = shape_of(kind);
    const GridChart& c = m.chart();
    const int ni = c.n_t() - 2;
    if (coeff.size() != s.n_blocks * ni)
        throw UsageError("mode_lift: coefficient size mismatch");

    Eigen::RowVectorXd cth, sth;
    mode_profiles(c, mode, cth, sth);

    TensorField f(s.rank, c.n_t(), c.n_theta());
    for (int i = 0; i < ni; ++i) {
        const int it = i + 1;
        if (s.rank == 0) {
            f.comp(0).row(it) = coeff[i] * cth;
        } else if (s.rank == 1) {
            f.comp(0).row(it) = coeff[i] * cth;
            f.comp(1).row(it) = coeff[ni + i] * sth;
        } else {
            f.comp(0).row(it) = coeff[i] * cth;
            f.comp(1).row(it) = coeff[ni + i] * sth;
            f.comp(3).row(it) = -(m.metric_qq()[it] / m.metric_tt()[it]) * coeff[i] * cth;
        }
    }
    if (s.rank == 2) {
        f.comp(2) = f.comp(1);
        f.set_tracefree(true);
    }
    return f;
}

VectorXd mode_restrict(const SurfaceModel& m, OpKind kind, int mode, const TensorField& f) {
    check_mode(m, mode);
    const ModeShape s = shape_of(kind);
    const GridChart& c = m.chart();
    if (f.rank() != s.rank || f.n_t() != c.n_t() || f.n_theta() != c.n_theta())
        throw UsageError("mode_restrict: field shape mismatch");
    const int ni = c.n_t() - 2;

    Eigen::RowVectorXd cth, sth;
    mode_profiles(c, mode, cth, sth);
    const double fac = ((mode == 0) ? 1.0 : 2.0) / c.n_theta();

    VectorXd v(s.n_blocks * ni);
    for (int i = 0; i < ni; ++i) {
        const int it = i + 1;
        v[i] = fac * f.comp(0).row(it).dot(cth);
        if (s.n_blocks == 2) v[ni + i] = fac * f.comp(1).row(it).dot(sth);
    }
    return v;
}

AssembledOperator assemble_operator(const SurfaceModel& m, OpKind kind, int mode) {
    check_mode(m, mode);
    const ModeShape s = shape_of(kind);
    const GridChart& c = m.chart();
    const int ni = c.n_t() - 2;
    const int dim = s.n_blocks * ni;

    AssembledOperator op;
    op.kind = kind;
    op.mode = mode;
    op.n_blocks = s.n_blocks;
    op.interior = ni;
    op.matrix = MatrixXd::Zero(dim, dim);

    // the radial stencil is narrow, so many columns can share one operator
    // application; entries outside the band are recorded as leak
    const int halfband = 6;
    const int spacing = 2 * halfband + 1;
    double leak = 0.0;
    for (int b = 0; b < s.n_blocks; ++b) {
        for (int color = 0; color < spacing && color < ni; ++color) {
            VectorXd basis = VectorXd::Zero(dim);
            for (int j = color; j < ni; j += spacing) basis[b * ni + j] = 1.0;
            const VectorXd out =
                mode_restrict(m, kind, mode, laplacian(m, kind, mode_lift(m, kind, mode, basis)));
            const double colmax = std::max(out.cwiseAbs().maxCoeff(), 1e-300);
            for (int b2 = 0; b2 < s.n_blocks; ++b2) {
                for (int i = 0; i < ni; ++i) {
                    // nearest comb tooth
                    int j = color + spacing * (int)std::lround((double)(i - color) / spacing);
                    j = std::clamp(j, color, color + spacing * ((ni - 1 - color) / spacing));
                    if (std::abs(i - j) <= halfband)
                        op.matrix(b2 * ni + i, b * ni + j) = out[b2 * ni + i];
                    else
                        leak = std::max(leak, std::abs(out[b2 * ni + i]) / colmax);
                }
            }
        }
    }
    op.comb_leak = leak;

    // discrete L2 weights of the coefficient parameterization
    const double pim = (mode == 0) ? 2.0 * M_PI : M_PI;
    op.weight.resize(dim);
    for (int i = 0; i < ni; ++i) {
        const int it = i + 1;
        const double w = m.weight()[it];
        const double A = m.metric_tt()[it], B = m.metric_qq()[it];
        if (s.rank == 0) {
            op.weight[i] = w * pim;
        } else if (s.rank == 1) {
            op.weight[i] = w / A * pim;
            op.weight[ni + i] = w / B * pim;
        } else {
            op.weight[i] = 2.0 * w / (A * A) * pim;
            op.weight[ni + i] = 2.0 * w / (A * B) * pim;
        }
    }

    const MatrixXd wa = op.weight.asDiagonal() * op.matrix;
    op.symmetry_defect =
        (wa - wa.transpose()).cwiseAbs().maxCoeff() / std::max(wa.cwiseAbs().maxCoeff(), 1e-300);
    return op;
}

MatrixXd AssembledOperator::symmetrized() const {
    const ArrayXd sq = weight.array().sqrt();
    MatrixXd S = sq.matrix().asDiagonal() * matrix;
    for (int j = 0; j < S.cols(); ++j) S.col(j) /= sq[j];
    return 0.5 * (S + S.transpose());
}

void write_matrix_coo(const std::string& path, const MatrixXd& A, double drop_tol) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open " + path + " for writing");
    out << "row,col,value\n";
    char buf[64];
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) {
            if (std::abs(A(i, j)) <= drop_tol) continue;
            std::snprintf(buf, sizeof buf, "%.17g", A(i, j));
            out << i << ',' << j << ',' << buf << '\n';
        }
}

} // namespace ahspec
