#include "ahspec/decompose.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

namespace ahspec {

namespace {

// cos / sin projections of one component onto mode m (interior rows)
void project_mode(const GridChart& c, const MatrixXd& f, int mode, VectorXd& pc, VectorXd& ps) {
    const int ni = c.n_t() - 2;
    Eigen::RowVectorXd cth(c.n_theta()), sth(c.n_theta());
    for (int j = 0; j < c.n_theta(); ++j) {
        cth[j] = std::cos(mode * c.theta()[j]);
        sth[j] = std::sin(mode * c.theta()[j]);
    }
    const double fac = ((mode == 0) ? 1.0 : 2.0) / c.n_theta();
    pc.resize(ni);
    ps.resize(ni);
    for (int i = 0; i < ni; ++i) {
        pc[i] = fac * f.row(i + 1).dot(cth);
        ps[i] = fac * f.row(i + 1).dot(sth);
    }
}

void add_mode(const GridChart& c, MatrixXd& f, int mode, const VectorXd& pc, const VectorXd& ps) {
    Eigen::RowVectorXd cth(c.n_theta()), sth(c.n_theta());
    for (int j = 0; j < c.n_theta(); ++j) {
        cth[j] = std::cos(mode * c.theta()[j]);
        sth[j] = std::sin(mode * c.theta()[j]);
    }
    for (int i = 0; i < pc.size(); ++i)
        f.row(i + 1) += pc[i] * cth + ps[i] * sth;
}

// smallest eigenvalue of the symmetrized operator via inverse iteration
// reusing the LU factorization of the plain matrix
double smallest_eig(const AssembledOperator& op, const Eigen::PartialPivLU<MatrixXd>& lu) {
    const ArrayXd sq = op.weight.array().sqrt();
    auto apply_inv = [&](const VectorXd& x) -> VectorXd {
        // S^{-1} x with S = W^{1/2} A W^{-1/2}
        return lu.solve(x.cwiseQuotient(sq.matrix())).cwiseProduct(sq.matrix());
    };
    VectorXd x = VectorXd::Ones(op.dim()).normalized();
    double est = 0.0;
    for (int it = 0; it < 200; ++it) {
        const VectorXd y = apply_inv(x);
        const double mu = x.dot(y); // -> 1/lambda_min
        if (mu == 0.0) break;
        const double next = 1.0 / mu;
        x = y.normalized();
        if (it > 5 && std::abs(next - est) <= 1e-10 * std::abs(next)) return next;
        est = next;
    }
    return est;
}

} // namespace

TensorField solve_scalar_poisson(const SurfaceModel& m, const TensorField& rhs) {
    if (rhs.rank() != 0) throw UsageError("solve_scalar_poisson: scalar rhs expected");
    const GridChart& c = m.chart();
    const double scale = std::max(rhs.max_abs(), 1e-300);
    TensorField u(0, c.n_t(), c.n_theta());
    for (int mode = 0; 2 * mode < c.n_theta(); ++mode) {
        VectorXd pc, ps;
        project_mode(c, rhs.comp(0), mode, pc, ps);
        if (pc.cwiseAbs().maxCoeff() <= 1e-14 * scale &&
            ps.cwiseAbs().maxCoeff() <= 1e-14 * scale)
            continue;
        const AssembledOperator op = assemble_operator(m, OpKind::ScalarLaplacian, mode);
        Eigen::PartialPivLU<MatrixXd> lu(op.matrix);
        const VectorXd uc = lu.solve(pc);
        VectorXd us = VectorXd::Zero(pc.size());
        if (mode > 0) us = lu.solve(ps);
        add_mode(c, u.comp(0), mode, uc, us);
    }
    return u;
}

TensorField solve_oneform(const SurfaceModel& m, OpKind kind, const TensorField& rhs,
                          int max_mode, double* coercivity_out) {
    if (rhs.rank() != 1) throw UsageError("solve_oneform: one-form rhs expected");
    const GridChart& c = m.chart();
    const int ni = c.n_t() - 2;
    if (max_mode < 0) max_mode = c.n_theta() / 2 - 1;
    if (2 * max_mode >= c.n_theta())
        throw UsageError("solve_oneform: max_mode beyond the theta grid");
    const double scale = std::max(rhs.max_abs(), 1e-300);

    TensorField w(1, c.n_t(), c.n_theta());
    double coer = std::numeric_limits<double>::infinity();
    for (int mode = 0; mode <= max_mode; ++mode) {
        VectorXd tc, ts, qc, qs;
        project_mode(c, rhs.comp(0), mode, tc, ts);
        project_mode(c, rhs.comp(1), mode, qc, qs);
        const double amp = std::max({tc.cwiseAbs().maxCoeff(), ts.cwiseAbs().maxCoeff(),
                                     qc.cwiseAbs().maxCoeff(), qs.cwiseAbs().maxCoeff()});
        if (amp <= 1e-14 * scale && !coercivity_out) continue;
        const AssembledOperator op = assemble_operator(m, kind, mode);
        Eigen::PartialPivLU<MatrixXd> lu(op.matrix);
        if (coercivity_out) coer = std::min(coer, smallest_eig(op, lu));
        if (amp <= 1e-14 * scale) continue;

        // family (v_t cos, v_q sin); at mode 0 both profiles are constant and
        // the whole content sits in the cos projections
        VectorXd b1(2 * ni);
        b1 << tc, (mode == 0 ? qc : qs);
        const VectorXd x1 = lu.solve(b1);
        // family (-v_t sin, v_q cos), same radial matrix by rotation invariance
        VectorXd x2 = VectorXd::Zero(2 * ni);
        if (mode > 0) {
            VectorXd b2(2 * ni);
            b2 << -ts, qc;
            x2 = lu.solve(b2);
        }
        if (mode == 0) {
            // theta-constant profiles: both blocks sit in the cos slot
            const VectorXd z = VectorXd::Zero(ni);
            add_mode(c, w.comp(0), 0, x1.head(ni), z);
            add_mode(c, w.comp(1), 0, x1.tail(ni), z);
            continue;
        }
        add_mode(c, w.comp(0), mode, x1.head(ni), -x2.head(ni));
        add_mode(c, w.comp(1), mode, x2.tail(ni), x1.tail(ni));
    }
    if (coercivity_out) *coercivity_out = coer;
    return w;
}

OneFormDecomposition hodge_decompose(const SurfaceModel& m, const TensorField& omega) {
    if (omega.rank() != 1) throw UsageError("hodge_decompose: one form expected");
    OneFormDecomposition d;

    const TensorField u = solve_scalar_poisson(m, codifferential(m, omega));
    d.exact = exterior_d(m, u);

    TensorField rhs2 = codifferential(m, hodge_star(m, omega));
    rhs2 *= -1.0;
    const TensorField v = solve_scalar_poisson(m, rhs2);
    d.coexact = hodge_star(m, exterior_d(m, v));

    d.harmonic = omega;
    d.harmonic -= d.exact;
    d.harmonic -= d.coexact;

    d.exact_norm = l2_norm(m, d.exact);
    d.coexact_norm = l2_norm(m, d.coexact);
    d.harmonic_norm = l2_norm(m, d.harmonic);
    const double s = std::max({d.exact_norm, d.coexact_norm, d.harmonic_norm, 1e-300});
    d.cross_max = std::max({std::abs(l2_inner_product(m, d.exact, d.coexact)),
                            std::abs(l2_inner_product(m, d.exact, d.harmonic)),
                            std::abs(l2_inner_product(m, d.coexact, d.harmonic))}) /
                  (s * s);
    return d;
}

std::string OneFormDecomposition::summary_json() const {
    nlohmann::json j;
    j["version"] = 1;
    j["exact_norm"] = exact_norm;
    j["coexact_norm"] = coexact_norm;
    j["harmonic_norm"] = harmonic_norm;
    j["cross_max"] = cross_max;
    return j.dump(2);
}

TTSplit tt_project(const SurfaceModel& m, const TensorField& h, int max_mode) {
    if (h.rank() != 2 || !h.tracefree())
        throw UsageError("tt_project: trace-free symmetric 2-tensor expected");
    TTSplit s;
    const TensorField rhs = divergence(m, h);
    const double rhs_norm = l2_norm(m, rhs);
    s.xi = solve_oneform(m, OpKind::DivLRing, rhs, max_mode, &s.coercivity);
    s.lring = conformal_killing(m, s.xi);
    s.tt = h;
    s.tt -= s.lring;
    s.tt.set_tracefree(true);
    s.div_residual = l2_norm(m, divergence(m, s.tt)) / std::max(rhs_norm, 1e-300);
    const double denom = std::max(l2_norm(m, s.tt) * l2_norm(m, s.lring), 1e-300);
    s.cross = l2_inner_product(m, s.tt, s.lring) / denom;
    return s;
}

std::string TTSplit::summary_json() const {
    nlohmann::json j;
    j["version"] = 1;
    j["div_residual"] = div_residual;
    j["coercivity"] = coercivity;
    j["cross"] = cross;
    return j.dump(2);
}

} // namespace ahspec
