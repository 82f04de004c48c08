#pragma once

#include "ahspec/grid.hpp"
#include "ahspec/smoothbump.hpp"

#include <functional>
#include <optional>
#include <string>

namespace ahspec {

// All Christoffel symbols of a rotationally symmetric diagonal metric
// A(t)dt^2 + B(t)dtheta^2 in the internal (t,theta) chart.  Only three
// families are nonzero; symmetry in the lower pair holds by storage.
struct ChristoffelField {
    ArrayXd t_tt;   // Gamma^t_{tt}
    ArrayXd t_qq;   // Gamma^t_{theta theta}
    ArrayXd q_tq;   // Gamma^theta_{t theta} = Gamma^theta_{theta t}

    // Gamma^k_{ij} at radial node i_t, indices in {0=t, 1=theta}
    double gamma(int k, int i, int j, int i_t) const {
        if (k == 0) {
            if (i == 0 && j == 0) return t_tt[i_t];
            if (i == 1 && j == 1) return t_qq[i_t];
            return 0.0;
        }
        if (i != j) return q_tq[i_t];
        return 0.0;
    }
};

// Profile ghat(r) of a collar metric g = r^{-2}(dr^2 + ghat(r) dtheta^2),
// with its r-derivative.
struct GhatProfile {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
};

class SurfaceModel {
  public:
    enum class Kind { HyperbolicDisk, Collar, ConformalPerturbation, WarpedFixture };

    Kind kind() const { return kind_; }
    const GridChart& chart() const { return chart_; }

    // metric components in internal coordinates
    const ArrayXd& metric_tt() const { return A_; }
    const ArrayXd& metric_qq() const { return B_; }
    const ArrayXd& metric_tt_d() const { return Ap_; }
    const ArrayXd& metric_qq_d() const { return Bp_; }
    const ArrayXd& sqrtdet() const { return sqrtdet_; }

    // radial quadrature weight wt * sqrt(det g); full node weight is
    // weight()[i] * chart().wtheta()
    const ArrayXd& weight() const { return w_; }

    const ArrayXd& scalar_curvature() const { return R_; }
    const ArrayXd& scalar_curvature_d() const { return Rp_; }
    const ChristoffelField& christoffel() const { return gamma_; }

    // collar profile samples at r(t) (HyperbolicDisk/Collar kinds)
    const ArrayXd& ghat() const { return ghat_; }
    const ArrayXd& ghat_d() const { return ghatp_; }

    // conformal factor samples (zero unless ConformalPerturbation)
    const ArrayXd& conformal_factor() const { return conf_u_; }

    bool rotationally_symmetric() const { return true; }

    std::string kind_name() const;

    // JSON snapshot of the construction parameters (versioned)
    std::string snapshot_json() const;

    friend SurfaceModel build_hyperbolic_disk(double, double, int, int);
    friend SurfaceModel build_collar_metric(const GhatProfile&, double, double, int, int);
    friend SurfaceModel build_conformal_perturbation(const SurfaceModel&, const PlateauBump&);
    friend SurfaceModel build_conformal_perturbation(const SurfaceModel&, const MollifierBump&);
    friend SurfaceModel build_warped_fixture(const GridChart&,
                                             const std::function<double(double)>&,
                                             const std::function<double(double)>&,
                                             const std::function<double(double)>&,
                                             const std::function<double(double)>&,
                                             const std::function<double(double)>&,
                                             const std::function<double(double)>&);

  private:
    explicit SurfaceModel(GridChart chart) : chart_(std::move(chart)) {}
    void finalize_common();
    void apply_conformal(const SurfaceModel& base, const ArrayXd& uu, const ArrayXd& up);

    Kind kind_ = Kind::HyperbolicDisk;
    GridChart chart_;
    ArrayXd A_, B_, Ap_, Bp_;
    ArrayXd sqrtdet_, w_;
    ArrayXd R_, Rp_;
    ArrayXd ghat_, ghatp_;
    ArrayXd conf_u_;
    ChristoffelField gamma_;
    std::string snapshot_;
};

// Poincare disk in geodesic polar form dt^2 + sinh(t)^2 dtheta^2,
// r = 2 exp(-t), ghat(r) = (1 - r^2/4)^2.
SurfaceModel build_hyperbolic_disk(double t_min, double t_max, int n_t, int n_theta);

// Generic AH collar with defining function r = exp(-t).
SurfaceModel build_collar_metric(const GhatProfile& ghat, double t_min, double t_max,
                                 int n_t, int n_theta);

// g = exp(2u) g_base with a radial conformal factor supported away from the walls.
SurfaceModel build_conformal_perturbation(const SurfaceModel& base, const PlateauBump& u);
SurfaceModel build_conformal_perturbation(const SurfaceModel& base, const MollifierBump& u);

// Test fixture: arbitrary diagonal warped metric with analytic first and second
// derivatives (used for sphere / flat checks).
SurfaceModel build_warped_fixture(const GridChart& chart,
                                  const std::function<double(double)>& A,
                                  const std::function<double(double)>& Ap,
                                  const std::function<double(double)>& App,
                                  const std::function<double(double)>& B,
                                  const std::function<double(double)>& Bp,
                                  const std::function<double(double)>& Bpp);

// Boundary-chart closed forms for a collar metric g = r^{-2}(dr^2 + ghat dtheta^2):
// Gamma^r_{rr}, Gamma^r_{theta theta}, Gamma^theta_{theta r} at radius r.
struct CollarChristoffel {
    double r_rr;
    double r_qq;
    double q_qr;
};
CollarChristoffel collar_christoffel(double r, double ghat, double ghat_d);

// Weighted area of the band t in [t1,t2] (quadrature over the model weights).
double band_area(const SurfaceModel& m, double t1, double t2);

} // namespace ahspec
