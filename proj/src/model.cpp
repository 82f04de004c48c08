#include "ahspec/model.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace ahspec {

namespace {

ArrayXd sample(const GridChart& c, const std::function<double(double)>& f) {
    ArrayXd out(c.n_t());
    for (int i = 0; i < c.n_t(); ++i)
        out[i] = f(c.t()[i]);
    return out;
}

ArrayXd apply_dt(const GridChart& c, const ArrayXd& f) {
    return (c.dt() * f.matrix()).array();
}

} // namespace

void SurfaceModel::finalize_common() {
    sqrtdet_ = (A_ * B_).sqrt();
    w_ = chart_.wt() * sqrtdet_;

    // Christoffel symbols from the *discrete* derivative of the sampled metric,
    // so that nabla g = 0 holds to rounding.
    const ArrayXd DtA = apply_dt(chart_, A_);
    const ArrayXd DtB = apply_dt(chart_, B_);
    gamma_.t_tt = DtA / (2.0 * A_);
    gamma_.t_qq = -DtB / (2.0 * A_);
    gamma_.q_tq = DtB / (2.0 * B_);

    if (conf_u_.size() == 0) conf_u_ = ArrayXd::Zero(chart_.n_t());
}

std::string SurfaceModel::kind_name() const {
    switch (kind_) {
        case Kind::HyperbolicDisk: return "hyperbolic_disk";
        case Kind::Collar: return "collar";
        case Kind::ConformalPerturbation: return "conformal_perturbation";
        case Kind::WarpedFixture: return "warped_fixture";
    }
    return "unknown";
}

std::string SurfaceModel::snapshot_json() const { return snapshot_; }

SurfaceModel build_hyperbolic_disk(double t_min, double t_max, int n_t, int n_theta) {
    if (!(t_min > 0.0) || !(t_max - t_min >= 1.0))
        throw ConfigError("build_hyperbolic_disk: need t_min > 0 and t_max - t_min >= 1");
    SurfaceModel m{GridChart(t_min, t_max, n_t, n_theta, 2.0)};
    m.kind_ = SurfaceModel::Kind::HyperbolicDisk;
    const int n = m.chart_.n_t();
    m.A_ = ArrayXd::Ones(n);
    m.Ap_ = ArrayXd::Zero(n);
    m.B_.resize(n);
    m.Bp_.resize(n);
    m.ghat_.resize(n);
    m.ghatp_.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = m.chart_.t()[i];
        const double sh = std::sinh(t), ch = std::cosh(t);
        m.B_[i] = sh * sh;
        m.Bp_[i] = 2.0 * sh * ch;
        const double r = m.chart_.r()[i];
        m.ghat_[i] = (1.0 - r * r / 4.0) * (1.0 - r * r / 4.0);
        m.ghatp_[i] = -r * (1.0 - r * r / 4.0);
    }
    m.R_ = ArrayXd::Constant(n, -2.0);
    m.Rp_ = ArrayXd::Zero(n);
    m.finalize_common();

    nlohmann::json j;
    j["version"] = 1;
    j["kind"] = m.kind_name();
    j["t_min"] = t_min;
    j["t_max"] = t_max;
    j["n_t"] = n_t;
    j["n_theta"] = n_theta;
    j["r0"] = 2.0;
    m.snapshot_ = j.dump(2);
    return m;
}

SurfaceModel build_collar_metric(const GhatProfile& ghat, double t_min, double t_max,
                                 int n_t, int n_theta) {
    if (!(t_min > 0.0) || !(t_max > t_min))
        throw ConfigError("build_collar_metric: invalid t range");
    const double g0 = ghat.value(0.0);
    if (!std::isfinite(g0) || !(g0 > 0.0))
        throw DomainError("build_collar_metric: ghat(0) must be finite and positive");
    SurfaceModel m{GridChart(t_min, t_max, n_t, n_theta, 1.0)};
    m.kind_ = SurfaceModel::Kind::Collar;
    const int n = m.chart_.n_t();
    m.A_ = ArrayXd::Ones(n);
    m.Ap_ = ArrayXd::Zero(n);
    m.B_.resize(n);
    m.Bp_.resize(n);
    m.ghat_.resize(n);
    m.ghatp_.resize(n);
    for (int i = 0; i < n; ++i) {
        const double r = m.chart_.r()[i];
        const double g = ghat.value(r), gp = ghat.deriv(r);
        if (!(g > 0.0))
            throw DomainError("build_collar_metric: ghat must be positive on the range");
        m.ghat_[i] = g;
        m.ghatp_[i] = gp;
        m.B_[i] = g / (r * r);
        m.Bp_[i] = (2.0 * g - r * gp) / (r * r);
    }
    // K = -(1/(2 sqrt(B))) d/dt (B'/sqrt(B))  for A = 1
    const ArrayXd Q = m.Bp_ / m.B_.sqrt();
    m.R_ = 2.0 * (-(m.chart_.dt() * Q.matrix()).array() / (2.0 * m.B_.sqrt()));
    m.Rp_ = (m.chart_.dt() * m.R_.matrix()).array();
    m.finalize_common();

    nlohmann::json j;
    j["version"] = 1;
    j["kind"] = m.kind_name();
    j["t_min"] = t_min;
    j["t_max"] = t_max;
    j["n_t"] = n_t;
    j["n_theta"] = n_theta;
    j["r0"] = 1.0;
    m.snapshot_ = j.dump(2);
    return m;
}

void SurfaceModel::apply_conformal(const SurfaceModel& base, const ArrayXd& uu,
                                   const ArrayXd& up) {
    const GridChart& c = base.chart();
    kind_ = Kind::ConformalPerturbation;
    const ArrayXd e2u = (2.0 * uu).exp();
    A_ = e2u * base.metric_tt();
    B_ = e2u * base.metric_qq();
    Ap_ = e2u * (base.metric_tt_d() + 2.0 * up * base.metric_tt());
    Bp_ = e2u * (base.metric_qq_d() + 2.0 * up * base.metric_qq());
    conf_u_ = uu;
    ghat_ = base.ghat();
    ghatp_ = base.ghat_d();

    // generic diagonal-metric curvature, numeric outer derivative
    const ArrayXd S = (A_ * B_).sqrt();
    const ArrayXd Q = Bp_ / S;
    R_ = -(c.dt() * Q.matrix()).array() / S;
    Rp_ = (c.dt() * R_.matrix()).array();
    finalize_common();
}

SurfaceModel build_conformal_perturbation(const SurfaceModel& base, const PlateauBump& u) {
    const GridChart& c = base.chart();
    if (u.amplitude != 0.0 && !(u.a > c.t_min() && u.b < c.t_max()))
        throw DomainError("build_conformal_perturbation: support must stay inside the walls");
    const int n = c.n_t();
    ArrayXd uu(n), up(n);
    for (int i = 0; i < n; ++i) {
        uu[i] = u.value(c.t()[i]);
        up[i] = u.d1(c.t()[i]);
    }
    SurfaceModel m{c};
    m.apply_conformal(base, uu, up);
    nlohmann::json j = nlohmann::json::parse(base.snapshot_json());
    j["kind"] = m.kind_name();
    j["perturbation"] = {{"a", u.a}, {"b", u.b}, {"ramp", u.ramp}, {"amplitude", u.amplitude}};
    m.snapshot_ = j.dump(2);
    return m;
}

SurfaceModel build_conformal_perturbation(const SurfaceModel& base, const MollifierBump& u) {
    const GridChart& c = base.chart();
    if (u.amplitude != 0.0 &&
        !(u.center - u.halfwidth > c.t_min() && u.center + u.halfwidth < c.t_max()))
        throw DomainError("build_conformal_perturbation: support must stay inside the walls");
    const int n = c.n_t();
    ArrayXd uu(n), up(n);
    for (int i = 0; i < n; ++i) {
        uu[i] = u.value(c.t()[i]);
        up[i] = u.d1(c.t()[i]);
    }
    SurfaceModel m{c};
    m.apply_conformal(base, uu, up);
    nlohmann::json j = nlohmann::json::parse(base.snapshot_json());
    j["kind"] = m.kind_name();
    j["perturbation"] = {
        {"amplitude", u.amplitude}, {"center", u.center}, {"halfwidth", u.halfwidth}};
    m.snapshot_ = j.dump(2);
    return m;
}

SurfaceModel build_warped_fixture(const GridChart& chart,
                                  const std::function<double(double)>& A,
                                  const std::function<double(double)>& Ap,
                                  const std::function<double(double)>& App,
                                  const std::function<double(double)>& B,
                                  const std::function<double(double)>& Bp,
                                  const std::function<double(double)>& Bpp) {
    SurfaceModel m{chart};
    m.kind_ = SurfaceModel::Kind::WarpedFixture;
    m.A_ = sample(chart, A);
    m.Ap_ = sample(chart, Ap);
    m.B_ = sample(chart, B);
    m.Bp_ = sample(chart, Bp);
    const ArrayXd App_ = sample(chart, App);
    const ArrayXd Bpp_ = sample(chart, Bpp);
    for (int i = 0; i < chart.n_t(); ++i)
        if (!(m.A_[i] > 0.0 && m.B_[i] > 0.0))
            throw DomainError("build_warped_fixture: metric components must be positive");
    const ArrayXd S = (m.A_ * m.B_).sqrt();
    const ArrayXd Sp = (m.Ap_ * m.B_ + m.A_ * m.Bp_) / (2.0 * S);
    const ArrayXd Qp = Bpp_ / S - m.Bp_ * Sp / (S * S);
    m.R_ = -Qp / S;
    m.Rp_ = (chart.dt() * m.R_.matrix()).array();
    m.finalize_common();

    nlohmann::json j;
    j["version"] = 1;
    j["kind"] = m.kind_name();
    j["t_min"] = chart.t_min();
    j["t_max"] = chart.t_max();
    j["n_t"] = chart.n_t();
    j["n_theta"] = chart.n_theta();
    m.snapshot_ = j.dump(2);
    return m;
}

CollarChristoffel collar_christoffel(double r, double ghat, double ghat_d) {
    CollarChristoffel c;
    c.r_rr = -1.0 / r;
    c.r_qq = ghat / r - 0.5 * ghat_d;
    c.q_qr = -1.0 / r + 0.5 * ghat_d / ghat;
    return c;
}

double band_area(const SurfaceModel& m, double t1, double t2) {
    const GridChart& c = m.chart();
    const int i1 = static_cast<int>(std::lround((t1 - c.t_min()) / c.h_t()));
    const int i2 = static_cast<int>(std::lround((t2 - c.t_min()) / c.h_t()));
    if (i1 < 0 || i2 >= c.n_t() || i2 <= i1)
        throw UsageError("band_area: band must align with grid nodes inside the domain");
    double s = 0.0;
    for (int i = i1; i <= i2; ++i) {
        double w = c.h_t() * m.sqrtdet()[i];
        if (i == i1 || i == i2) w *= 0.5;
        s += w;
    }
    return 2.0 * M_PI * s;
}

} // namespace ahspec
