// Acceptance gate: one line per criterion, nonzero exit on any failure.
// Runs the full-scale configurations, so expect a few minutes of wall time.

#include "ahspec/identities.hpp"
#include "ahspec/runconfig.hpp"
#include "ahspec/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace ahspec;

namespace {

int g_failures = 0;

void criterion(int id, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool in_band(double order) { return order >= 1.7 && order <= 2.3; }

// 1. Exact-identity ladder: N_t in {128,256,512}, t in [0.5,12], 8 seeds,
//    every fitted convergence order in [1.7, 2.3], under two minutes.
void criterion_identity_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    LadderSetup setup;
    setup.t_min = 0.5;
    setup.t_max = 12.0;
    setup.n_theta = 16;
    setup.rungs = {128, 256, 512};

    using CheckFn = IdentityReport (*)(std::uint64_t, bool, const LadderSetup&);
    const std::vector<CheckFn> exact = {
        check_div_lring,  check_commutator_div, check_commutator_killing,
        check_weitzenbock, check_norm_identity,
    };

    bool ok = true;
    double order_lo = 1e9, order_hi = -1e9;
    std::string worst;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        for (CheckFn fn : exact) {
            const IdentityReport r = fn(seed, false, setup);
            if (!r.pass || !in_band(r.order)) {
                ok = false;
                worst = r.name + " seed " + std::to_string(seed) + " order " +
                        std::to_string(r.order);
            }
            order_lo = std::min(order_lo, r.order);
            order_hi = std::max(order_hi, r.order);
        }
    }
    const double dt = seconds_since(t0);
    if (dt > 120.0) ok = false;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "identity orders in [%.2f, %.2f] over 8 seeds, %.1f s%s%s", order_lo,
                  order_hi, dt, worst.empty() ? "" : ", first offender: ", worst.c_str());
    criterion(1, ok, buf);
}

// 2. Negative control: dropping the S-ring(dR, .) term in the Killing
//    commutator stalls the residual by >= 10x on a perturbed model.
void criterion_negative_control() {
    LadderSetup setup;
    setup.t_min = 0.5;
    setup.t_max = 12.0;
    setup.n_theta = 16;
    setup.rungs = {128, 256, 512};
    setup.perturbed = true;

    const IdentityReport healthy = check_commutator_killing(2, false, setup);
    const IdentityReport broken = check_commutator_killing(2, true, setup);
    const double stall = broken.value / healthy.value;
    const bool ok = stall >= 10.0 && healthy.order >= 1.7 && !broken.pass;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "sabotaged residual %.3g = %.0fx healthy %.3g, healthy order %.2f",
                  broken.value, stall, healthy.value, healthy.order);
    criterion(2, ok, buf);
}

// 3 + 4. Explicit eigentensor families at N_t = 512.
void criterion_eigentensors() {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 512, 32);
    const EigentensorReport rep = known_eigentensor_check(2, 6, m);

    bool ok3 = true, ok4 = true;
    double worst_r2 = 0.0, worst_plateau = 0.0, order_lo = 1e9, order_hi = -1e9;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const EigentensorRow& row = rep.rows[i];
        worst_r2 = std::max(worst_r2, row.r_minus2);
        worst_plateau = std::max(worst_plateau, row.r0_plateau);
        order_lo = std::min(order_lo, rep.order_minus2[i]);
        order_hi = std::max(order_hi, rep.order_minus2[i]);
        if (row.r_minus2 > 1e-3 || !in_band(rep.order_minus2[i])) ok3 = false;
        if (row.r0 > 1e-3 + row.leak || row.r0_plateau > 1e-3) ok4 = false;
    }
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "TT residuals n=2..6 max %.2e, refinement orders in [%.2f, %.2f]",
                  worst_r2, order_lo, order_hi);
    criterion(3, ok3, buf);
    std::snprintf(buf, sizeof(buf),
                  "kernel residual within 1e-3 + leak, plateau part max %.2e",
                  worst_plateau);
    criterion(4, ok4, buf);
}

// 5. Quasi-mode scan slopes, under five minutes.
void criterion_quasimode_scan() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> lambdas = {0.25, 0.5, 1.0};
    const std::vector<double> radii = {2.0, 4.0, 8.0, 16.0};
    const SurfaceModel m = build_scan_chart(lambdas, radii, 0.5, 8);
    const QuasimodeScan scan = quasimode_scan(lambdas, radii, m);

    bool ok = true;
    std::string detail = "slopes";
    for (const ScanFit& f : scan.fits) {
        if (!f.pass || f.ratio_slope > -0.7 || f.norm2_slope < 0.7) ok = false;
        char buf[96];
        std::snprintf(buf, sizeof(buf), " (lam %.2f: ratio %.2f, norm2 %.2f)", f.lambda,
                      f.ratio_slope, f.norm2_slope);
        detail += buf;
    }
    const double dt = seconds_since(t0);
    if (dt > 300.0) ok = false;
    char buf[64];
    std::snprintf(buf, sizeof(buf), ", %.1f s", dt);
    criterion(5, ok, detail + buf);
}

// 6. Brute-force indicial exponents against the closed-form roots.
void criterion_indicial() {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 12.0, 512, 8);
    bool ok = true;
    std::string detail = "Re(s) fits";
    for (double lambda : {0.25, 0.5, 1.0}) {
        const IndicialFit f = indicial_fit(lambda, m, 6.0, 9.0);
        const IndicialRoots r = indicial_roots(lambda);
        // 5% of |Re(s)| = 3/2
        if (std::abs(f.sigma + 1.5) > 0.075) ok = false;
        if (std::abs(f.sigma - r.s1.real()) > 0.075) ok = false;
        if (std::abs(f.mu - std::abs(r.s1.imag())) > 0.05) ok = false;
        char buf[64];
        std::snprintf(buf, sizeof(buf), " %.4f%+.4fi", f.sigma, f.mu);
        detail += buf;
    }
    criterion(6, ok, detail + " against -1.5 +- i sqrt(4 lam - 1)/2");
}

// 7. Three-part spectral picture at desk scale: Rayleigh floors over 64 seeded
//    bumps plus the -2 eigentensor quotients.
void criterion_rayleigh() {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 12.0, 512, 32);
    const double scalar_floor = rayleigh_floor(OpKind::ScalarLaplacian, 64, m, 7);
    const double lich_floor = rayleigh_floor(OpKind::Lichnerowicz, 64, m, 7);

    bool ok = scalar_floor >= 0.24 && lich_floor >= 0.24;
    double worst_dev = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const TensorField s = traceless_square(m, harmonic_oneform(n, m));
        const double q = rayleigh_quotient(m, OpKind::Lichnerowicz, s, 4);
        worst_dev = std::max(worst_dev, std::abs(q + 2.0));
    }
    if (worst_dev > 1e-3) ok = false;
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "floors: scalar %.3f, Lichnerowicz on L-ring du %.3f (>= 0.24); "
                  "S-ring quotients within %.1e of -2",
                  scalar_floor, lich_floor, worst_dev);
    criterion(7, ok, buf);
}

// 8. No discrete eigenvalue survives in the spurious windows across the
//    truncation and resolution variants, modes m <= 8.
void criterion_persistence() {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 12.0, 512, 32);
    SpectralConfig cfg;
    cfg.m_max = 8;
    cfg.count = 10;
    cfg.n_lo = 2;
    cfg.n_hi = 6;
    cfg.with_scan = false;
    const SpectrumReport rep = spectral_picture(m, cfg);

    int stuck = 0;
    for (const PersistenceEntry& p : rep.persistence)
        if (p.persistent) ++stuck;
    bool verdict_ok = false;
    for (const Verdict& v : rep.verdicts)
        if (v.name == "no_spurious_window") verdict_ok = (v.status == "pass");
    const bool ok = stuck == 0 && verdict_ok;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%zu window candidates tracked, %d persistent (modes m <= 8, "
                  "t_max+2 / 2N_t / t_min/2 variants)",
                  rep.persistence.size(), stuck);
    criterion(8, ok, buf);
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_identity_suite();
    criterion_negative_control();
    criterion_eigentensors();
    criterion_quasimode_scan();
    criterion_indicial();
    criterion_rayleigh();
    criterion_persistence();
    std::printf("%s (%d/8 criteria, %.0f s)\n", g_failures == 0 ? "ACCEPT" : "REJECT",
                8 - g_failures, seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
