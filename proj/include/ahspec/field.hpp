#pragma once

#include "ahspec/model.hpp"

#include <cstdint>
#include <vector>

namespace ahspec {

enum class Rank : int {
    Scalar = 0,
    OneForm = 1,
    SymTwoTensor = 2, // stored as full rank-2 with u_tq == u_qt
    TwoTensor = 2,
    ThreeTensor = 3, // d^nabla output, antisymmetric in the first two slots
};

// Rank-p covariant tensor field sampled on the (t,theta) grid.  Components are
// stored fully (2^p arrays of size n_t x n_theta); the multi-index is encoded
// big-endian in the component number, bit 0 = t, bit 1 = theta, first slot in
// the highest bit.  So for p=2: comp(0)=u_tt, comp(1)=u_tq, comp(2)=u_qt,
// comp(3)=u_qq.
class TensorField {
  public:
    TensorField() = default;
    TensorField(int rank, int n_t, int n_theta);

    static TensorField zeros(int rank, const GridChart& c) {
        return TensorField(rank, c.n_t(), c.n_theta());
    }

    int rank() const { return rank_; }
    int n_comp() const { return 1 << rank_; }
    int n_t() const { return n_t_; }
    int n_theta() const { return n_theta_; }

    bool tracefree() const { return tracefree_; }
    void set_tracefree(bool v) { tracefree_ = v; }

    MatrixXd& comp(int c) { return comps_[c]; }
    const MatrixXd& comp(int c) const { return comps_[c]; }

    // rank-2 convenience accessors
    const MatrixXd& tt() const { return comps_[0]; }
    const MatrixXd& tq() const { return comps_[1]; }
    const MatrixXd& qq() const { return comps_[3]; }

    TensorField& operator+=(const TensorField& o);
    TensorField& operator-=(const TensorField& o);
    TensorField& operator*=(double s);
    friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
    friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
    friend TensorField operator*(double s, TensorField a) { return a *= s; }

    double max_abs() const;

  private:
    int rank_ = 0, n_t_ = 0, n_theta_ = 0;
    bool tracefree_ = false;
    std::vector<MatrixXd> comps_;
};

struct NormReport {
    double l2 = 0.0;
    double h1 = 0.0;
    double l4 = 0.0;
};

// pointwise metric contraction <a,b>_g as an (n_t x n_theta) array
MatrixXd pointwise_dot(const SurfaceModel& m, const TensorField& a, const TensorField& b);

double l2_inner_product(const SurfaceModel& m, const TensorField& a, const TensorField& b);
double l2_norm(const SurfaceModel& m, const TensorField& a);
double l4_norm(const SurfaceModel& m, const TensorField& a);

// L2, H1 (value + covariant derivative) and L4 norms
NormReport norms(const SurfaceModel& m, const TensorField& a);

// the metric itself as a rank-2 field
TensorField metric_field(const SurfaceModel& m);

// g^{ij} u_{ij}
TensorField trace(const SurfaceModel& m, const TensorField& u);

// u - (tr u / 2) g ; output flagged trace-free
TensorField restrict_tracefree(const SurfaceModel& m, const TensorField& u);

// pullback of d(Re z^n) from the Euclidean unit disk, via s = tanh(t/2);
// harmonic on the disk, merely closed on a conformal perturbation of it
TensorField harmonic_oneform(int n, const SurfaceModel& m);

// deterministic seeded smooth field supported in (t0,t1); rank 0, 1 or 2
// (rank 2 output is symmetric, not trace-free)
TensorField random_bump_field(int rank, double t0, double t1, std::uint64_t seed,
                              const SurfaceModel& m, int max_mode = 4);

// CSV export/import of a field (documented column order:
// t,theta,comp_0,...,comp_{2^p-1})
void write_field_csv(const std::string& path, const SurfaceModel& m, const TensorField& f);

} // namespace ahspec
