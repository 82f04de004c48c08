#pragma once

#include "ahspec/assemble.hpp"

#include <complex>
#include <string>
#include <vector>

namespace ahspec {

// Annulus cutoff Psi_R(rho) = chi_{4R}(rho) (1 - chi_R(rho)) with
// chi_R(rho) = chi(ln rho / (-R)) and chi a polynomial smoothstep equal to 1
// on (-inf, 1] and 0 on [2, inf).  Supported in e^{-8R} < rho < e^{-R},
// identically 1 on e^{-4R} < rho < e^{-2R}.
struct CutoffProfile {
    double R = 1.0;
    int chi_order = 7;
    double c1 = 0.0, c2 = 0.0; // measured sup |Psi^(k)(rho)| R rho^k

    double value(double rho) const;
    double d1(double rho) const;
    double d2(double rho) const;
};

// Measures the derivative constants and checks the support annulus fits the
// truncated domain.
CutoffProfile build_cutoff(double R, const SurfaceModel& m, int chi_order = 7);

struct QuasiModeSpec {
    double lambda = 0.25;
    double mu = 0.0; // sqrt(lambda - 1/4)
    double a = 1.0, b = 0.0;
    double R = 1.0;
};
QuasiModeSpec make_quasimode_spec(double lambda, double a, double b, double R);

// f(r) = sqrt(r) (a cos(mu ln r) + b sin(mu ln r)), closed-form derivatives
struct RadialProfile {
    double mu = 0.0, a = 1.0, b = 0.0;
    double value(double r) const;
    double d1(double r) const;
    double d2(double r) const;
};
RadialProfile radial_profile(const QuasiModeSpec& spec);

// F = f''/2 + f'/r - ghat' f'/(4 ghat) sampled at the chart nodes; when `cut`
// is given, f is first multiplied by the cutoff
ArrayXd profile_F(const SurfaceModel& m, const RadialProfile& f, const CutoffProfile* cut);

// h_R = F_{f_R}(r) (dr^2 - ghat dtheta^2) in internal coordinates, Fourier
// mode 0, trace-free by construction
TensorField build_quasimode(const QuasiModeSpec& spec, const CutoffProfile& cut,
                            const SurfaceModel& m);

struct QuasimodeResidual {
    double res = 0.0;   // |(Delta_L - lambda) h|_L2
    double norm = 0.0;  // |h|_L2
    double ratio = 0.0; // res / norm
};
QuasimodeResidual quasimode_residual(double lambda, const TensorField& h,
                                     const SurfaceModel& m);

// closed-form characteristic exponents s = (-3 +- sqrt(1 - 4 lambda)) / 2
struct IndicialRoots {
    std::complex<double> s1, s2;
};
IndicialRoots indicial_roots(double lambda);

// brute-force fit: minimize the residual of (Delta_L - lambda) applied to
// r^{sigma + i mu} (dr^2 - ghat dtheta^2) over a window t in [t_lo, t_hi]
struct IndicialFit {
    double sigma = 0.0;
    double mu = 0.0;
    double residual = 0.0;
};
IndicialFit indicial_fit(double lambda, const SurfaceModel& m, double t_lo, double t_hi);

struct ScanRow {
    double lambda, R, res, norm, ratio, slope_partial;
};
struct ScanFit {
    double lambda = 0.0;
    double ratio_slope = 0.0; // d ln(ratio) / d ln(R), least squares
    double norm2_slope = 0.0; // linear-fit slope of |h|^2 against R
    double c_fit = 0.0;       // min |h|^2 / R over the scanned R
    bool pass = false;        // ratio_slope <= -0.7 and norm2_slope >= 0.7
};
struct QuasimodeScan {
    std::vector<ScanRow> rows;
    std::vector<ScanFit> fits;
    std::string summary_json() const;
};
QuasimodeScan quasimode_scan(const std::vector<double>& lambdas,
                             const std::vector<double>& Rs, const SurfaceModel& m);

// disk chart sized so every scanned cutoff annulus fits and the radial
// resolution covers the fastest oscillation
SurfaceModel build_scan_chart(const std::vector<double>& lambdas,
                              const std::vector<double>& Rs, double t_min,
                              int n_theta);

void write_scan_csv(const std::string& path, const QuasimodeScan& s);
// two-column (ln R, ln ratio) plot data for one lambda
void write_scan_plot(const std::string& path, const QuasimodeScan& s, double lambda);

} // namespace ahspec
