#pragma once

#include "ahspec/quasimode.hpp"

#include <optional>

namespace ahspec {

struct EigenPair {
    double value = 0.0;
    VectorXd vector;       // coefficient-space eigenvector (x = W^{-1/2} z)
    double residual = 0.0; // |A x - value x|_W / |x|_W
};

// lowest `count` eigenpairs of the weighted-symmetric problem for one block
std::vector<EigenPair> eigensolve_block(const AssembledOperator& op, int count);

// Rayleigh quotient <L u, u> / <u, u> in the weighted L2 product; `skip`
// radial rows at each wall are excluded from both integrals (the wall stencils
// are one-sided, so fields that do not vanish there need a margin)
double rayleigh_quotient(const SurfaceModel& m, OpKind kind, const TensorField& u,
                         int skip = 0);

// minimum Rayleigh quotient over seeded compactly supported samples:
//   ScalarLaplacian  -> random scalar bumps u
//   HodgeLaplacian   -> exact differentials d u of random scalar bumps
//   Lichnerowicz     -> L-ring(d u) images of random scalar bumps
double rayleigh_floor(OpKind kind, int n_samples, const SurfaceModel& m,
                      std::uint64_t seed);

// Residuals of the explicit eigentensor families, n = n_lo..n_hi:
//   r_minus2 = |Delta_L S(w_n) + 2 S(w_n)| / |S(w_n)|   (S = traceless square)
//   r0       = |Delta_L Lr(eta_n)| / |Lr(eta_n)|         (eta_n plateau-cut)
// r0 is split into the plateau part and the cutoff-ramp leak; a half-resolution
// rerun gives the refinement orders of r_minus2 and of the plateau part.
struct EigentensorRow {
    int n = 0;
    double r_minus2 = 0.0;
    double r0 = 0.0;
    double r0_plateau = 0.0;
    double leak = 0.0;
};
struct EigentensorReport {
    std::vector<EigentensorRow> rows;
    std::vector<EigentensorRow> coarse; // same checks at n_t/2
    std::vector<double> order_minus2;   // per n, log2(coarse/fine)
    std::vector<double> order_zero;     // per n, plateau part
};
EigentensorReport known_eigentensor_check(int n_lo, int n_hi, const SurfaceModel& m);

struct SpectralConfig {
    int m_max = 8;   // Fourier blocks 0..m_max
    int count = 10;  // eigenpairs per block
    int n_lo = 2, n_hi = 6;
    bool with_scan = true;
    std::vector<double> scan_lambdas{0.25, 0.5, 1.0};
    std::vector<double> scan_Rs{2.0, 4.0, 8.0, 16.0};
    int scan_n_theta = 8;
    std::uint64_t seed = 1;
    // needed to rebuild refinement variants of a perturbed model
    std::optional<MollifierBump> perturbation;
};

// one base-run eigenvalue inside the spurious windows, tracked across the
// refinement variants (t_max + 2, 2 N_t, t_min / 2)
struct PersistenceEntry {
    int mode = 0;
    double value = 0.0;
    double move_tmax = 0.0, move_grid = 0.0, move_tmin = 0.0; // relative
    bool persistent = false; // all three moves < 10%
};

struct Verdict {
    std::string name;
    std::string status; // "pass", "fail", "hypothesis-not-met", "skipped"
    std::string detail;
};

struct SpectrumReport {
    std::string model_kind;
    SpectralConfig config;
    double t_min = 0.0, t_max = 0.0;
    int n_t = 0, n_theta = 0;
    std::vector<std::vector<double>> eigenvalues; // per mode, ascending
    std::vector<double> pair_residual_max;        // per mode
    EigentensorReport tensors;
    QuasimodeScan scan;
    std::vector<PersistenceEntry> persistence;
    std::vector<Verdict> verdicts;

    bool all_pass() const; // no verdict carries status "fail"
    std::string report_json() const;
};

SpectrumReport spectral_picture(const SurfaceModel& m, const SpectralConfig& cfg);

// "mode,index,eigenvalue" rows
void write_spectrum_csv(const std::string& path, const SpectrumReport& r);
// two-column histogram (bin center, count) of all base-run eigenvalues
void write_spectrum_histogram(const std::string& path, const SpectrumReport& r,
                              double bin_width = 0.1);

} // namespace ahspec
