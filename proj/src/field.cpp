#include "ahspec/field.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace ahspec {

TensorField::TensorField(int rank, int n_t, int n_theta)
    : rank_(rank), n_t_(n_t), n_theta_(n_theta), comps_(1 << rank) {
    if (rank < 0 || rank > 4) throw UsageError("TensorField: rank out of range");
    for (auto& c : comps_)
        c = MatrixXd::Zero(n_t, n_theta);
}

TensorField& TensorField::operator+=(const TensorField& o) {
    if (rank_ != o.rank_ || n_t_ != o.n_t_ || n_theta_ != o.n_theta_)
        throw UsageError("TensorField: shape mismatch");
    for (int c = 0; c < n_comp(); ++c)
        comps_[c] += o.comps_[c];
    return *this;
}
TensorField& TensorField::operator-=(const TensorField& o) {
    if (rank_ != o.rank_ || n_t_ != o.n_t_ || n_theta_ != o.n_theta_)
        throw UsageError("TensorField: shape mismatch");
    for (int c = 0; c < n_comp(); ++c)
        comps_[c] -= o.comps_[c];
    return *this;
}
TensorField& TensorField::operator*=(double s) {
    for (auto& c : comps_)
        c *= s;
    return *this;
}

double TensorField::max_abs() const {
    double m = 0.0;
    for (const auto& c : comps_)
        m = std::max(m, c.array().abs().maxCoeff());
    return m;
}

namespace {

void check_shape(const SurfaceModel& m, const TensorField& a) {
    if (a.n_t() != m.chart().n_t() || a.n_theta() != m.chart().n_theta())
        throw UsageError("field does not conform to the model chart");
}

// product over slots of g^{ss} for component c at radial node i
double contraction_factor(const SurfaceModel& m, int rank, int c, int i) {
    double f = 1.0;
    for (int s = 0; s < rank; ++s) {
        const int bit = (c >> s) & 1;
        f *= bit ? 1.0 / m.metric_qq()[i] : 1.0 / m.metric_tt()[i];
    }
    return f;
}

} // namespace

MatrixXd pointwise_dot(const SurfaceModel& m, const TensorField& a, const TensorField& b) {
    check_shape(m, a);
    if (a.rank() != b.rank()) throw UsageError("pointwise_dot: rank mismatch");
    MatrixXd out = MatrixXd::Zero(a.n_t(), a.n_theta());
    for (int c = 0; c < a.n_comp(); ++c) {
        for (int i = 0; i < a.n_t(); ++i) {
            const double f = contraction_factor(m, a.rank(), c, i);
            out.row(i) += f * a.comp(c).row(i).cwiseProduct(b.comp(c).row(i));
        }
    }
    return out;
}

double l2_inner_product(const SurfaceModel& m, const TensorField& a, const TensorField& b) {
    const MatrixXd d = pointwise_dot(m, a, b);
    const double wq = m.chart().wtheta();
    double s = 0.0;
    for (int i = 0; i < a.n_t(); ++i)
        s += m.weight()[i] * d.row(i).sum();
    return s * wq;
}

double l2_norm(const SurfaceModel& m, const TensorField& a) {
    return std::sqrt(std::max(0.0, l2_inner_product(m, a, a)));
}

double l4_norm(const SurfaceModel& m, const TensorField& a) {
    const MatrixXd d = pointwise_dot(m, a, a);
    const double wq = m.chart().wtheta();
    double s = 0.0;
    for (int i = 0; i < a.n_t(); ++i)
        s += m.weight()[i] * d.row(i).cwiseProduct(d.row(i)).sum();
    return std::pow(std::max(0.0, s * wq), 0.25);
}

TensorField metric_field(const SurfaceModel& m) {
    TensorField g(2, m.chart().n_t(), m.chart().n_theta());
    for (int i = 0; i < g.n_t(); ++i) {
        g.comp(0).row(i).setConstant(m.metric_tt()[i]);
        g.comp(3).row(i).setConstant(m.metric_qq()[i]);
    }
    return g;
}

TensorField trace(const SurfaceModel& m, const TensorField& u) {
    check_shape(m, u);
    if (u.rank() != 2) throw UsageError("trace: rank-2 field expected");
    TensorField tr(0, u.n_t(), u.n_theta());
    for (int i = 0; i < u.n_t(); ++i)
        tr.comp(0).row(i) =
            u.comp(0).row(i) / m.metric_tt()[i] + u.comp(3).row(i) / m.metric_qq()[i];
    return tr;
}

TensorField restrict_tracefree(const SurfaceModel& m, const TensorField& u) {
    const TensorField tr = trace(m, u);
    TensorField out = u;
    for (int i = 0; i < u.n_t(); ++i) {
        out.comp(0).row(i) -= 0.5 * m.metric_tt()[i] * tr.comp(0).row(i);
        out.comp(3).row(i) -= 0.5 * m.metric_qq()[i] * tr.comp(0).row(i);
    }
    out.set_tracefree(true);
    return out;
}

TensorField harmonic_oneform(int n, const SurfaceModel& m) {
    if (n < 1) throw UsageError("harmonic_oneform: n must be >= 1");
    if (m.kind() != SurfaceModel::Kind::HyperbolicDisk &&
        m.kind() != SurfaceModel::Kind::ConformalPerturbation)
        throw UsageError("harmonic_oneform: model must be the hyperbolic disk");
    const GridChart& c = m.chart();
    TensorField w(1, c.n_t(), c.n_theta());
    for (int i = 0; i < c.n_t(); ++i) {
        const double s = std::tanh(0.5 * c.t()[i]);
        const double sp = 0.5 * (1.0 - s * s);
        const double radial_t = n * std::pow(s, n - 1) * sp;
        const double radial_q = -n * std::pow(s, n);
        for (int j = 0; j < c.n_theta(); ++j) {
            w.comp(0)(i, j) = radial_t * std::cos(n * c.theta()[j]);
            w.comp(1)(i, j) = radial_q * std::sin(n * c.theta()[j]);
        }
    }
    return w;
}

namespace {

// portable uniform in [-1,1] from a fully specified engine
double draw(std::mt19937_64& rng) {
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

} // namespace

TensorField random_bump_field(int rank, double t0, double t1, std::uint64_t seed,
                              const SurfaceModel& m, int max_mode) {
    const GridChart& c = m.chart();
    if (!(t0 > c.t_min() && t1 < c.t_max() && t1 > t0))
        throw UsageError("random_bump_field: support must lie strictly inside the domain");
    if (rank < 0 || rank > 2) throw UsageError("random_bump_field: rank 0, 1 or 2 only");
    if (2 * max_mode >= c.n_theta())
        throw UsageError("random_bump_field: max_mode too large for the theta grid");

    std::mt19937_64 rng(seed);
    // smooth compactly supported envelope (all derivatives vanish at t0, t1)
    MollifierBump bump{0.5 * (t0 + t1), 0.5 * (t1 - t0), 1.0};

    TensorField f(rank, c.n_t(), c.n_theta());
    const int indep[3] = {1, 2, 3}; // independent components per rank
    for (int k = 0; k < indep[rank]; ++k) {
        // trig polynomial coefficients and a radial modulation per component
        std::vector<double> a(max_mode + 1), b(max_mode + 1);
        for (int mm = 0; mm <= max_mode; ++mm) {
            a[mm] = draw(rng);
            b[mm] = draw(rng);
        }
        const double r1 = draw(rng), r2 = draw(rng);
        const int comp = (rank == 2) ? (k == 0 ? 0 : (k == 1 ? 1 : 3)) : k;
        for (int i = 0; i < c.n_t(); ++i) {
            const double tau = (c.t()[i] - t0) / (t1 - t0);
            const double bt = bump.value(c.t()[i]) * (1.0 + r1 * tau + r2 * tau * tau);
            if (bt == 0.0) continue;
            for (int j = 0; j < c.n_theta(); ++j) {
                double v = a[0];
                for (int mm = 1; mm <= max_mode; ++mm)
                    v += a[mm] * std::cos(mm * c.theta()[j]) +
                         b[mm] * std::sin(mm * c.theta()[j]);
                f.comp(comp)(i, j) = bt * v;
            }
        }
    }
    if (rank == 2) f.comp(2) = f.comp(1); // symmetry
    return f;
}

void write_field_csv(const std::string& path, const SurfaceModel& m, const TensorField& f) {
    check_shape(m, f);
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw UsageError("write_field_csv: cannot open " + path);
    std::fprintf(fp, "t,theta");
    for (int c = 0; c < f.n_comp(); ++c)
        std::fprintf(fp, ",comp_%d", c);
    std::fprintf(fp, "\n");
    for (int i = 0; i < f.n_t(); ++i)
        for (int j = 0; j < f.n_theta(); ++j) {
            std::fprintf(fp, "%.17g,%.17g", m.chart().t()[i], m.chart().theta()[j]);
            for (int c = 0; c < f.n_comp(); ++c)
                std::fprintf(fp, ",%.17g", f.comp(c)(i, j));
            std::fprintf(fp, "\n");
        }
    std::fclose(fp);
}

} // namespace ahspec
