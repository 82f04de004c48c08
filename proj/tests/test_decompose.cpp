#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahspec/decompose.hpp"

#include <cmath>

using namespace ahspec;

TEST_CASE("poisson solve inverts the discrete laplacian exactly") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 128, 16);
    const TensorField beta = random_bump_field(0, 2.0, 6.0, 3, m);
    const TensorField rhs = laplacian(m, OpKind::ScalarLaplacian, beta);
    const TensorField u = solve_scalar_poisson(m, rhs);
    TensorField d = u;
    d -= beta;
    CHECK(d.max_abs() <= 1e-9 * (1.0 + beta.max_abs()));
}

TEST_CASE("hodge: an exact form is recovered in the exact slot") {
    double prev = 1e9;
    for (int nt : {128, 256}) {
        const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, nt, 16);
        const TensorField beta = random_bump_field(0, 2.0, 6.0, 5, m);
        const TensorField omega = exterior_d(m, beta);
        const OneFormDecomposition d = hodge_decompose(m, omega);
        const double s = l2_norm(m, omega);
        CHECK(d.exact_norm == doctest::Approx(s).epsilon(0.02));
        const double rest = std::max(d.coexact_norm, d.harmonic_norm) / s;
        CHECK(rest <= 0.02);
        if (nt > 128) CHECK(rest <= prev / 2.0);
        prev = rest;
    }
}

TEST_CASE("hodge: a coexact form is recovered in the coexact slot") {
    double prev = 1e9;
    for (int nt : {128, 256}) {
        const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, nt, 16);
        const TensorField v = random_bump_field(0, 2.0, 6.0, 8, m);
        const TensorField omega = hodge_star(m, exterior_d(m, v));
        const OneFormDecomposition d = hodge_decompose(m, omega);
        const double s = l2_norm(m, omega);
        CHECK(d.coexact_norm == doctest::Approx(s).epsilon(0.03));
        const double rest = std::max(d.exact_norm, d.harmonic_norm) / s;
        CHECK(rest <= 0.03);
        if (nt > 128) CHECK(rest <= prev / 2.0);
        prev = rest;
    }
}

TEST_CASE("hodge: harmonic forms land in the harmonic slot") {
    const SurfaceModel m = build_hyperbolic_disk(0.1, 10.0, 512, 16);
    for (int n : {1, 2}) {
        const TensorField w = harmonic_oneform(n, m);
        const OneFormDecomposition d = hodge_decompose(m, w);
        const double s = l2_norm(m, w);
        CHECK(d.harmonic_norm >= 0.98 * s);
        CHECK(d.exact_norm <= 0.1 * s);
        CHECK(d.coexact_norm <= 0.1 * s);
        CHECK(d.harmonic_norm * d.harmonic_norm == doctest::Approx(M_PI * n).epsilon(0.05));
    }
}

TEST_CASE("hodge: three-way mix splits with small cross terms") {
    const SurfaceModel m = build_hyperbolic_disk(0.1, 10.0, 512, 16);
    const TensorField beta = random_bump_field(0, 2.0, 6.0, 11, m);
    const TensorField v = random_bump_field(0, 2.5, 7.0, 12, m);
    TensorField omega = exterior_d(m, beta);
    omega += hodge_star(m, exterior_d(m, v));
    omega += harmonic_oneform(1, m);
    const OneFormDecomposition d = hodge_decompose(m, omega);
    CHECK(d.exact_norm == doctest::Approx(l2_norm(m, exterior_d(m, beta))).epsilon(0.05));
    CHECK(d.coexact_norm ==
          doctest::Approx(l2_norm(m, hodge_star(m, exterior_d(m, v)))).epsilon(0.05));
    CHECK(d.harmonic_norm == doctest::Approx(std::sqrt(M_PI)).epsilon(0.05));
    CHECK(d.cross_max <= 0.05);
    const std::string js = d.summary_json();
    CHECK(js.find("cross_max") != std::string::npos);
}

TEST_CASE("tt_project: a pure L-ring field projects to nearly zero") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 256, 16);
    const TensorField xi = random_bump_field(1, 2.0, 6.0, 21, m);
    const TensorField h = conformal_killing(m, xi);
    const TTSplit s = tt_project(m, h);
    CHECK(l2_norm(m, s.tt) <= 2e-2 * l2_norm(m, h));
    CHECK(s.coercivity >= 0.3);
}

TEST_CASE("tt_project: output is nearly divergence free and orthogonal") {
    double prev = 1e9;
    for (int nt : {256, 512}) {
        const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, nt, 16);
        const TensorField h = restrict_tracefree(m, random_bump_field(2, 2.0, 6.0, 22, m));
        const TTSplit s = tt_project(m, h);
        CHECK(s.div_residual <= 0.05);
        CHECK(std::abs(s.cross) <= 0.05);
        // reconstruction is exact by construction
        TensorField rec = s.tt;
        rec += s.lring;
        rec -= h;
        CHECK(rec.max_abs() <= 1e-10 * (1.0 + h.max_abs()));
        if (nt > 256) CHECK(s.div_residual <= prev / 2.0);
        prev = s.div_residual;
    }
}

TEST_CASE("tt_project rejects fields without the trace-free mark") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 64, 16);
    const TensorField h = random_bump_field(2, 2.0, 6.0, 23, m);
    CHECK_THROWS_AS(tt_project(m, h), UsageError);
}
