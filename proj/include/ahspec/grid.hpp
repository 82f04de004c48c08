#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <vector>

namespace ahspec {

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Log-radial chart: t = -ln(r/r0), uniform t nodes, uniform theta nodes.
// Node (i,j) = (t[i], theta[j]).  Walls are i=0 and i=n_t-1.
class GridChart {
  public:
    GridChart(double t_min, double t_max, int n_t, int n_theta, double r0);

    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    int n_t() const { return n_t_; }
    int n_theta() const { return n_theta_; }
    double h_t() const { return h_t_; }
    double r0() const { return r0_; }

    const ArrayXd& t() const { return t_; }
    const ArrayXd& theta() const { return theta_; }
    // r(t) = r0 * exp(-t)
    const ArrayXd& r() const { return r_; }

    // trapezoid weights in t (include h_t); theta weight is 2*pi/n_theta
    const ArrayXd& wt() const { return wt_; }
    double wtheta() const { return 2.0 * M_PI / n_theta_; }

    // second-order d/dt matrix: centered interior, one-sided at walls
    const Eigen::SparseMatrix<double>& dt() const { return dt_; }
    const Eigen::SparseMatrix<double>& dt_transpose() const { return dtT_; }
    // exact spectral d/dtheta matrix (antisymmetric)
    const MatrixXd& dtheta() const { return dth_; }

    // apply d/dt along columns of an (n_t x n_theta) component array
    MatrixXd ddt(const MatrixXd& f) const { return dt_ * f; }
    MatrixXd ddt_transpose(const MatrixXd& f) const { return dtT_ * f; }
    MatrixXd ddtheta(const MatrixXd& f) const { return f * dth_.transpose(); }

    bool same_as(const GridChart& o) const;

  private:
    double t_min_, t_max_, h_t_, r0_;
    int n_t_, n_theta_;
    ArrayXd t_, theta_, r_, wt_;
    Eigen::SparseMatrix<double> dt_, dtT_;
    MatrixXd dth_;
};

} // namespace ahspec
