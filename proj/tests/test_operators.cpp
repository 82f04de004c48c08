#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahspec/operators.hpp"

#include <cmath>

using namespace ahspec;

namespace {

// max abs over rows away from the walls
double interior_max(const TensorField& f, int skip) {
    double v = 0.0;
    for (int c = 0; c < f.n_comp(); ++c)
        for (int i = skip; i < f.n_t() - skip; ++i)
            v = std::max(v, f.comp(c).row(i).cwiseAbs().maxCoeff());
    return v;
}

} // namespace

TEST_CASE("covariant derivative annihilates constants and the metric") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 128, 16);

    TensorField c = TensorField::zeros(0, m.chart());
    c.comp(0).setConstant(3.25);
    CHECK(covariant_derivative(m, c).max_abs() <= 1e-13);

    // coordinate components grow like B ~ sinh^2(t), so compare to that scale
    const double gscale = m.metric_qq().maxCoeff();
    const TensorField g = metric_field(m);
    CHECK(covariant_derivative(m, g).max_abs() <= 1e-12 * gscale);
    CHECK(divergence(m, g).max_abs() <= 1e-12 * gscale);
}

TEST_CASE("rotation Killing form: L-ring vanishes to rounding") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 128, 16);
    TensorField w = TensorField::zeros(1, m.chart());
    w.comp(1).colwise() = Eigen::VectorXd(m.metric_qq().matrix());
    const TensorField lw = symmetrized_derivative(m, w);
    CHECK(lw.max_abs() <= 1e-10 * m.metric_qq().maxCoeff());
    const TensorField lr = conformal_killing(m, w);
    CHECK(lr.max_abs() <= 1e-10 * m.metric_qq().maxCoeff());
}

TEST_CASE("scalar laplacian on the ghat = 1 collar: Delta sqrt(r) = sqrt(r)/4") {
    GhatProfile p{[](double) { return 1.0; }, [](double) { return 0.0; }};
    double prev = 1e9;
    for (int nt : {128, 256, 512}) {
        const SurfaceModel m = build_collar_metric(p, 0.5, 8.0, nt, 8);
        TensorField f = TensorField::zeros(0, m.chart());
        for (int i = 0; i < nt; ++i) f.comp(0).row(i).setConstant(std::exp(-0.5 * m.chart().t()[i]));
        TensorField lf = laplacian(m, OpKind::ScalarLaplacian, f);
        f *= 0.25;
        lf -= f;
        const double err = interior_max(lf, 3);
        if (nt > 128) CHECK(err <= prev / 3.0);
        prev = err;
    }
    CHECK(prev <= 2e-5);
}

TEST_CASE("covariant derivative and its adjoint pair exactly in the weighted product") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 96, 16);
    for (int rank : {0, 1, 2}) {
        const TensorField u = random_bump_field(rank, 1.5, 6.5, 21 + rank, m);
        TensorField v = covariant_derivative(m, random_bump_field(rank, 2.0, 7.0, 31 + rank, m));
        const double lhs = l2_inner_product(m, covariant_derivative(m, u), v);
        const double rhs = l2_inner_product(m, u, covariant_derivative_adjoint(m, v));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("rough laplacian is exactly self-adjoint and nonnegative") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 96, 16);
    for (int rank : {0, 1, 2}) {
        const TensorField u = random_bump_field(rank, 1.5, 6.0, 5, m);
        const TensorField v = random_bump_field(rank, 2.0, 6.5, 6, m);
        const double uv = l2_inner_product(m, rough_laplacian(m, u), v);
        const double vu = l2_inner_product(m, u, rough_laplacian(m, v));
        const double scale = std::abs(uv) + std::abs(vu) + 1.0;
        CHECK(std::abs(uv - vu) <= 1e-11 * scale);
        CHECK(l2_inner_product(m, rough_laplacian(m, u), u) >= 0.0);
    }
}

TEST_CASE("codifferential: exact adjoint route agrees with the direct contraction") {
    double prev = 1e9;
    for (int nt : {128, 256, 512}) {
        const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, nt, 16);
        const TensorField w = random_bump_field(1, 2.0, 6.0, 13, m);
        TensorField a = codifferential(m, w);
        a -= codifferential_direct(m, w);
        const double err = l2_norm(m, a);
        if (nt > 128) CHECK(err <= prev / 3.0);
        prev = err;
    }
}

TEST_CASE("adjoint relation between L-ring and divergence on trace-free fields") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 512, 16);
    const TensorField w = random_bump_field(1, 2.0, 6.0, 17, m);
    const TensorField h = restrict_tracefree(m, random_bump_field(2, 2.0, 6.0, 18, m));
    const double lhs = l2_inner_product(m, conformal_killing(m, w), h);
    const double rhs = l2_inner_product(m, w, divergence(m, h));
    CHECK(lhs == doctest::Approx(rhs).epsilon(2e-4));
}

TEST_CASE("traceless square on the flat fixture") {
    GridChart c(0.5, 4.0, 32, 8, 1.0);
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    const SurfaceModel m = build_warped_fixture(c, one, zero, zero, one, zero, zero);
    TensorField w = TensorField::zeros(1, c);
    w.comp(0).setConstant(1.0);
    const TensorField s = traceless_square(m, w);
    CHECK(s.comp(0).maxCoeff() == doctest::Approx(0.5));
    CHECK(s.comp(0).minCoeff() == doctest::Approx(0.5));
    CHECK(s.comp(1).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.comp(2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.qq().maxCoeff() == doctest::Approx(-0.5));
    CHECK(trace(m, s).max_abs() <= 1e-14);
}

TEST_CASE("S-ring(dR, xi) vanishes on constant-curvature models") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 64, 16);
    const TensorField xi = random_bump_field(1, 2.0, 6.0, 7, m);
    CHECK(s_ring_gradientR(m, xi).max_abs() <= 1e-12);
}

TEST_CASE("d^nabla output is antisymmetric in the first index pair") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 96, 16);
    const TensorField u = restrict_tracefree(m, random_bump_field(2, 2.0, 6.0, 8, m));
    const TensorField v = exterior_d_nabla(m, u);
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i) {
                const int c = 4 * i + 2 * j + k;
                const int cs = 4 * j + 2 * i + k;
                CHECK((v.comp(c) + v.comp(cs)).cwiseAbs().maxCoeff() <= 1e-11 * (1.0 + v.max_abs()));
            }
}

TEST_CASE("Weitzenboeck: (d^nabla)* d^nabla + L div = Delta_K, O(h^2)") {
    double prev = 1e9;
    for (int nt : {192, 384}) {
        const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, nt, 24);
        const TensorField u = restrict_tracefree(m, random_bump_field(2, 2.5, 6.0, 30, m));
        TensorField lhs = codiff_d_nabla(m, exterior_d_nabla(m, u));
        lhs += symmetrized_derivative(m, divergence(m, u));
        lhs -= laplacian(m, OpKind::DeltaK, u);
        const double err = l2_norm(m, lhs) / l2_norm(m, laplacian(m, OpKind::DeltaK, u));
        if (nt > 192) CHECK(err <= prev / 2.2);
        prev = err;
    }
    CHECK(prev <= 2e-2);
}

TEST_CASE("hodge star is an isometry with square -1") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 96, 16);
    const TensorField w = random_bump_field(1, 2.0, 6.0, 19, m);
    const TensorField sw = hodge_star(m, w);
    CHECK(l2_inner_product(m, sw, sw) == doctest::Approx(l2_inner_product(m, w, w)).epsilon(1e-13));
    TensorField ss = hodge_star(m, sw);
    ss += w;
    CHECK(ss.max_abs() <= 1e-13 * (1.0 + w.max_abs()));
    // pointwise orthogonality <w, *w> = 0
    CHECK(std::abs(l2_inner_product(m, w, sw)) <= 1e-12 * l2_inner_product(m, w, w));
}

TEST_CASE("harmonic one forms are near-killed by the Hodge laplacian") {
    double prev = 1e9;
    for (int nt : {256, 512}) {
        const SurfaceModel m = build_hyperbolic_disk(0.5, 10.0, nt, 32);
        const TensorField w = harmonic_oneform(2, m);
        const TensorField hw = laplacian(m, OpKind::HodgeLaplacian, w);
        const double err = interior_max(hw, 4);
        if (nt > 256) CHECK(err <= prev / 3.0);
        prev = err;
    }
    CHECK(prev <= 2e-3);
}

TEST_CASE("Lichnerowicz keeps trace-free fields exactly trace-free") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 96, 16);
    const TensorField u = restrict_tracefree(m, random_bump_field(2, 2.0, 6.0, 23, m));
    const TensorField lu = laplacian(m, OpKind::Lichnerowicz, u);
    CHECK(lu.tracefree());
    CHECK(trace(m, lu).max_abs() <= 1e-11 * (1.0 + lu.max_abs()));
    // Delta_L = Delta_K + R on trace-free inputs; compare after projection
    TensorField two = laplacian(m, OpKind::DeltaK, u);
    two += scale_radial(u, m.scalar_curvature());
    TensorField diff = restrict_tracefree(m, two);
    diff -= lu;
    CHECK(l2_norm(m, diff) <= 1e-10 * (1.0 + l2_norm(m, lu)));
}

TEST_CASE("exterior_d_oneform of an exact form vanishes to rounding") {
    // the discrete d commutes axiswise, so d(df) hits the rounding floor
    for (int nt : {128, 256}) {
        const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, nt, 16);
        const TensorField f = random_bump_field(0, 2.0, 6.0, 27, m);
        const TensorField df = exterior_d(m, f);
        CHECK(interior_max(exterior_d_oneform(m, df), 3) <= 1e-11);
    }
}
