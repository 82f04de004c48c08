#include "ahspec/grid.hpp"

#include <cmath>

namespace ahspec {

GridChart::GridChart(double t_min, double t_max, int n_t, int n_theta, double r0)
    : t_min_(t_min), t_max_(t_max), r0_(r0), n_t_(n_t), n_theta_(n_theta) {
    if (!(t_min > 0.0) || !(t_max > t_min))
        throw ConfigError("GridChart: need 0 < t_min < t_max");
    if (n_t < 16)
        throw ConfigError("GridChart: n_t must be >= 16");
    if (n_theta < 4 || n_theta % 2 != 0)
        throw ConfigError("GridChart: n_theta must be even and >= 4");

    h_t_ = (t_max - t_min) / (n_t - 1);
    t_.resize(n_t);
    for (int i = 0; i < n_t; ++i)
        t_[i] = t_min + i * h_t_;
    r_ = r0_ * (-t_).exp();

    theta_.resize(n_theta);
    for (int j = 0; j < n_theta; ++j)
        theta_[j] = 2.0 * M_PI * j / n_theta;

    wt_ = ArrayXd::Constant(n_t, h_t_);
    wt_[0] *= 0.5;
    wt_[n_t - 1] *= 0.5;

    // d/dt, second order
    std::vector<Eigen::Triplet<double>> trip;
    const double ih = 1.0 / (2.0 * h_t_);
    trip.emplace_back(0, 0, -3.0 * ih);
    trip.emplace_back(0, 1, 4.0 * ih);
    trip.emplace_back(0, 2, -1.0 * ih);
    for (int i = 1; i < n_t - 1; ++i) {
        trip.emplace_back(i, i - 1, -ih);
        trip.emplace_back(i, i + 1, ih);
    }
    trip.emplace_back(n_t - 1, n_t - 1, 3.0 * ih);
    trip.emplace_back(n_t - 1, n_t - 2, -4.0 * ih);
    trip.emplace_back(n_t - 1, n_t - 3, 1.0 * ih);
    dt_.resize(n_t, n_t);
    dt_.setFromTriplets(trip.begin(), trip.end());
    dtT_ = dt_.transpose();

    // spectral differentiation matrix on the periodic theta grid
    dth_.setZero(n_theta, n_theta);
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_theta; ++j) {
            if (i == j) continue;
            const double s = ((i - j) % 2 == 0) ? 1.0 : -1.0;
            dth_(i, j) = 0.5 * s / std::tan(0.5 * (theta_[i] - theta_[j]));
        }
    // enforce exact antisymmetry
    dth_ = 0.5 * (dth_ - dth_.transpose()).eval();
}

bool GridChart::same_as(const GridChart& o) const {
    return n_t_ == o.n_t_ && n_theta_ == o.n_theta_ && t_min_ == o.t_min_ &&
           t_max_ == o.t_max_ && r0_ == o.r0_;
}

} // namespace ahspec
