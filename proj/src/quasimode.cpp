#include "ahspec/quasimode.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ahspec {

namespace {

struct ChiEval {
    double v, d1, d2; // value and derivatives with respect to rho
};

// chi(ln rho / -Rs): 1 for rho >= e^{-Rs}, 0 for rho <= e^{-2 Rs}
ChiEval chi_eval(double rho, double Rs, int order) {
    const double u = -std::log(rho) / Rs - 1.0; // smoothstep argument
    double s, s1, s2;
    if (order == 5) {
        s = smoothstep5(u);
        s1 = smoothstep5_d1(u);
        s2 = smoothstep5_d2(u);
    } else {
        s = smoothstep7(u);
        s1 = smoothstep7_d1(u);
        s2 = smoothstep7_d2(u);
    }
    const double du = -1.0 / (Rs * rho);
    const double duu = 1.0 / (Rs * rho * rho);
    return {1.0 - s, -s1 * du, -(s2 * du * du + s1 * duu)};
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

double CutoffProfile::value(double rho) const {
    if (rho <= 0.0) throw DomainError("CutoffProfile: rho must be positive");
    return chi_eval(rho, 4.0 * R, chi_order).v * (1.0 - chi_eval(rho, R, chi_order).v);
}

double CutoffProfile::d1(double rho) const {
    if (rho <= 0.0) throw DomainError("CutoffProfile: rho must be positive");
    const ChiEval a = chi_eval(rho, 4.0 * R, chi_order);
    const ChiEval b = chi_eval(rho, R, chi_order);
    return a.d1 * (1.0 - b.v) - a.v * b.d1;
}

double CutoffProfile::d2(double rho) const {
    if (rho <= 0.0) throw DomainError("CutoffProfile: rho must be positive");
    const ChiEval a = chi_eval(rho, 4.0 * R, chi_order);
    const ChiEval b = chi_eval(rho, R, chi_order);
    return a.d2 * (1.0 - b.v) - 2.0 * a.d1 * b.d1 - a.v * b.d2;
}

CutoffProfile build_cutoff(double R, const SurfaceModel& m, int chi_order) {
    if (R <= 0.0) throw UsageError("build_cutoff: R must be positive");
    if (chi_order != 5 && chi_order != 7)
        throw UsageError("build_cutoff: chi_order must be 5 or 7");
    const GridChart& c = m.chart();
    const double r_out = c.r()[0];            // largest r on the chart
    const double r_in = c.r()[c.n_t() - 1];   // smallest r
    if (!(std::exp(-R) < r_out)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "build_cutoff: annulus outer edge e^-R = %g exceeds r(t_min) = %g; "
                      "need t_min < %g",
                      std::exp(-R), r_out, R + std::log(c.r0()));
        throw ConfigError(buf);
    }
    if (!(std::exp(-8.0 * R) > r_in)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "build_cutoff: annulus inner edge e^-8R = %g is inside r(t_max) = %g; "
                      "need t_max > %g",
                      std::exp(-8.0 * R), r_in, 8.0 * R + std::log(c.r0()));
        throw ConfigError(buf);
    }

    CutoffProfile p;
    p.R = R;
    p.chi_order = chi_order;
    // measure the derivative-bound constants on a fine log grid of the support
    const int n = 4000;
    for (int k = 0; k <= n; ++k) {
        const double lr = -8.0 * R + 7.0 * R * k / n;
        const double rho = std::exp(lr);
        p.c1 = std::max(p.c1, std::abs(p.d1(rho)) * R * rho);
        p.c2 = std::max(p.c2, std::abs(p.d2(rho)) * R * rho * rho);
    }
    return p;
}

QuasiModeSpec make_quasimode_spec(double lambda, double a, double b, double R) {
    if (lambda < 0.25 - 1e-12) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "quasimode spec: lambda = %g is below 1/4, profile is not oscillatory",
                      lambda);
        throw DomainError(buf);
    }
    if (a == 0.0 && b == 0.0) throw UsageError("quasimode spec: a and b must not both vanish");
    QuasiModeSpec s;
    s.lambda = lambda;
    s.mu = std::sqrt(std::max(0.0, lambda - 0.25));
    s.a = a;
    s.b = b;
    s.R = R;
    return s;
}

double RadialProfile::value(double r) const {
    if (r <= 0.0) throw DomainError("RadialProfile: r must be positive");
    const double x = std::log(r);
    return std::sqrt(r) * (a * std::cos(mu * x) + b * std::sin(mu * x));
}

double RadialProfile::d1(double r) const {
    if (r <= 0.0) throw DomainError("RadialProfile: r must be positive");
    const double x = std::log(r);
    const double g = a * std::cos(mu * x) + b * std::sin(mu * x);
    const double gp = mu * (-a * std::sin(mu * x) + b * std::cos(mu * x));
    return (0.5 * g + gp) / std::sqrt(r);
}

double RadialProfile::d2(double r) const {
    if (r <= 0.0) throw DomainError("RadialProfile: r must be positive");
    const double x = std::log(r);
    const double g = a * std::cos(mu * x) + b * std::sin(mu * x);
    return (-mu * mu - 0.25) * g / (r * std::sqrt(r));
}

RadialProfile radial_profile(const QuasiModeSpec& spec) {
    return RadialProfile{spec.mu, spec.a, spec.b};
}

ArrayXd profile_F(const SurfaceModel& m, const RadialProfile& f, const CutoffProfile* cut) {
    const GridChart& c = m.chart();
    ArrayXd F(c.n_t());
    for (int i = 0; i < c.n_t(); ++i) {
        const double r = c.r()[i];
        double v1 = f.d1(r), v2 = f.d2(r);
        if (cut) {
            const double pv = cut->value(r), p1 = cut->d1(r), p2 = cut->d2(r);
            const double fv = f.value(r);
            v2 = p2 * fv + 2.0 * p1 * v1 + pv * v2;
            v1 = p1 * fv + pv * f.d1(r);
        }
        F[i] = 0.5 * v2 + v1 / r - m.ghat_d()[i] * v1 / (4.0 * m.ghat()[i]);
    }
    return F;
}

TensorField build_quasimode(const QuasiModeSpec& spec, const CutoffProfile& cut,
                            const SurfaceModel& m) {
    const GridChart& c = m.chart();
    if (!(std::exp(-cut.R) < c.r()[0] && std::exp(-8.0 * cut.R) > c.r()[c.n_t() - 1]))
        throw ConfigError("build_quasimode: cutoff support does not fit the chart");
    const RadialProfile f = radial_profile(spec);
    const ArrayXd F = profile_F(m, f, &cut);
    TensorField h(2, c.n_t(), c.n_theta());
    for (int i = 0; i < c.n_t(); ++i) {
        const double r2 = c.r()[i] * c.r()[i];
        h.comp(0).row(i).setConstant(F[i] * r2);
        h.comp(3).row(i).setConstant(-F[i] * m.ghat()[i]);
    }
    h.set_tracefree(true);
    return h;
}

QuasimodeResidual quasimode_residual(double lambda, const TensorField& h,
                                     const SurfaceModel& m) {
    TensorField lh = laplacian(m, OpKind::Lichnerowicz, h);
    TensorField sh = h;
    sh *= lambda;
    lh -= sh;
    QuasimodeResidual q;
    q.res = l2_norm(m, lh);
    q.norm = l2_norm(m, h);
    q.ratio = q.res / q.norm;
    return q;
}

IndicialRoots indicial_roots(double lambda) {
    const std::complex<double> disc = std::sqrt(std::complex<double>(1.0 - 4.0 * lambda, 0.0));
    return {0.5 * (-3.0 + disc), 0.5 * (-3.0 - disc)};
}

IndicialFit indicial_fit(double lambda, const SurfaceModel& m, double t_lo, double t_hi) {
    const GridChart& c = m.chart();
    if (!(t_lo > c.t_min() && t_hi < c.t_max() && t_hi > t_lo))
        throw UsageError("indicial_fit: window must lie strictly inside the domain");
    const AssembledOperator op = assemble_operator(m, OpKind::Lichnerowicz, 0);
    const int in = op.interior;

    std::vector<int> window; // interior indices inside [t_lo, t_hi]
    for (int k = 0; k < in; ++k)
        if (c.t()[k + 1] >= t_lo && c.t()[k + 1] <= t_hi) window.push_back(k);
    if (window.size() < 8) throw UsageError("indicial_fit: window too small for the grid");

    // windowed residual of (Delta_L - lambda) on r^{sigma + i mu} q-bar,
    // combining the cos and sin parts of the complex power
    auto eval = [&](double sigma, double mu) {
        double res2 = 0.0, nrm2 = 0.0;
        for (int phase = 0; phase < 2; ++phase) {
            VectorXd x = VectorXd::Zero(op.dim());
            for (int k = 0; k < in; ++k) {
                const double lr = std::log(c.r()[k + 1]);
                const double p = std::exp(sigma * lr) *
                                 (phase == 0 ? std::cos(mu * lr) : std::sin(mu * lr));
                x[k] = p * c.r()[k + 1] * c.r()[k + 1]; // v_a coefficient
            }
            const VectorXd y = op.matrix * x - lambda * x;
            for (int k : window)
                for (int b = 0; b < op.n_blocks; ++b) {
                    const int idx = b * in + k;
                    res2 += op.weight[idx] * y[idx] * y[idx];
                    nrm2 += op.weight[idx] * x[idx] * x[idx];
                }
        }
        return std::sqrt(res2 / nrm2);
    };

    double best_s = -1.5, best_m = 0.5, best_r = 1e300;
    double step = 0.1;
    for (double s = -2.9; s <= -0.11; s += step)
        for (double mu = 0.0; mu <= 2.1; mu += step) {
            const double r = eval(s, mu);
            if (r < best_r) {
                best_r = r;
                best_s = s;
                best_m = mu;
            }
        }
    for (int level = 0; level < 3; ++level) {
        const double fine = step / 5.0;
        const double s0 = best_s, m0 = best_m;
        for (int i = -5; i <= 5; ++i)
            for (int j = -5; j <= 5; ++j) {
                const double s = s0 + fine * i;
                const double mu = std::max(0.0, m0 + fine * j);
                const double r = eval(s, mu);
                if (r < best_r) {
                    best_r = r;
                    best_s = s;
                    best_m = mu;
                }
            }
        step = fine;
    }
    return {best_s, best_m, best_r};
}

SurfaceModel build_scan_chart(const std::vector<double>& lambdas,
                              const std::vector<double>& Rs, double t_min,
                              int n_theta) {
    if (lambdas.empty() || Rs.empty())
        throw UsageError("build_scan_chart: lambda and R lists must be nonempty");
    const double max_r = *std::max_element(Rs.begin(), Rs.end());
    const double max_l = *std::max_element(lambdas.begin(), lambdas.end());
    const double t_hi = std::max(8.0 * max_r + std::log(2.0) + 1.0, t_min + 19.5);
    double h = 0.06;
    if (max_l > 0.25) h = std::min(h, (2.0 * M_PI / std::sqrt(max_l - 0.25)) / 16.0);
    const int n_t = static_cast<int>(std::ceil((t_hi - t_min) / h)) + 1;
    return build_hyperbolic_disk(t_min, t_hi, n_t, n_theta);
}

QuasimodeScan quasimode_scan(const std::vector<double>& lambdas,
                             const std::vector<double>& Rs, const SurfaceModel& m) {
    if (lambdas.empty() || Rs.empty())
        throw UsageError("quasimode_scan: lambda and R lists must be nonempty");
    double mu_max = 0.0;
    for (double l : lambdas) {
        const QuasiModeSpec s = make_quasimode_spec(l, 1.0, 0.0, Rs.front());
        mu_max = std::max(mu_max, s.mu);
    }
    // the radial grid must resolve the oscillation in ln r
    if (mu_max > 1e-9) {
        const double h_max = (2.0 * M_PI / mu_max) / 16.0;
        if (m.chart().h_t() > h_max) {
            char buf[160];
            const int need = static_cast<int>(
                std::ceil((m.chart().t_max() - m.chart().t_min()) / h_max)) + 1;
            std::snprintf(buf, sizeof buf,
                          "quasimode_scan: grid does not resolve mu = %g; need n_t >= %d",
                          mu_max, need);
            throw ConfigError(buf);
        }
    }

    QuasimodeScan out;
    for (double l : lambdas) {
        std::vector<double> lnR, lnRatio, Rlin, norm2;
        double prev_R = 0.0, prev_ratio = 0.0;
        ScanFit fit;
        fit.lambda = l;
        fit.c_fit = 1e300;
        for (double R : Rs) {
            const CutoffProfile cut = build_cutoff(R, m);
            const QuasiModeSpec spec = make_quasimode_spec(l, 1.0, 0.0, R);
            const TensorField h = build_quasimode(spec, cut, m);
            const QuasimodeResidual q = quasimode_residual(l, h, m);
            ScanRow row{l, R, q.res, q.norm, q.ratio, 0.0};
            if (prev_R > 0.0)
                row.slope_partial = std::log(q.ratio / prev_ratio) / std::log(R / prev_R);
            out.rows.push_back(row);
            lnR.push_back(std::log(R));
            lnRatio.push_back(std::log(q.ratio));
            Rlin.push_back(R);
            norm2.push_back(q.norm * q.norm);
            fit.c_fit = std::min(fit.c_fit, q.norm * q.norm / R);
            prev_R = R;
            prev_ratio = q.ratio;
        }
        fit.ratio_slope = ls_slope(lnR, lnRatio);
        fit.norm2_slope = ls_slope(Rlin, norm2);
        fit.pass = fit.ratio_slope <= -0.7 && fit.norm2_slope >= 0.7;
        out.fits.push_back(fit);
    }
    return out;
}

std::string QuasimodeScan::summary_json() const {
    nlohmann::json j;
    j["version"] = 1;
    j["n_rows"] = rows.size();
    j["fits"] = nlohmann::json::array();
    for (const auto& f : fits)
        j["fits"].push_back({{"c_fit", f.c_fit},
                             {"lambda", f.lambda},
                             {"norm2_slope", f.norm2_slope},
                             {"pass", f.pass},
                             {"ratio_slope", f.ratio_slope}});
    return j.dump(2);
}

void write_scan_csv(const std::string& path, const QuasimodeScan& s) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw UsageError("write_scan_csv: cannot open " + path);
    std::fprintf(fp, "lambda,R,res_l2,norm_l2,ratio,slope_partial\n");
    for (const auto& r : s.rows)
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.lambda, r.R, r.res,
                     r.norm, r.ratio, r.slope_partial);
    std::fclose(fp);
}

void write_scan_plot(const std::string& path, const QuasimodeScan& s, double lambda) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw UsageError("write_scan_plot: cannot open " + path);
    for (const auto& r : s.rows)
        if (r.lambda == lambda)
            std::fprintf(fp, "%.17g %.17g\n", std::log(r.R), std::log(r.ratio));
    std::fclose(fp);
}

} // namespace ahspec
