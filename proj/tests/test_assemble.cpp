#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahspec/assemble.hpp"
#include "ahspec/smoothbump.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

using namespace ahspec;

namespace {

VectorXd random_coeff(int dim, unsigned seed) {
    std::mt19937_64 rng(seed);
    VectorXd v(dim);
    for (int i = 0; i < dim; ++i)
        v[i] = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
    return v;
}

} // namespace

TEST_CASE("mode_restrict inverts mode_lift") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 96, 16);
    for (OpKind k : {OpKind::ScalarLaplacian, OpKind::HodgeLaplacian, OpKind::Lichnerowicz}) {
        for (int mode : {0, 1, 3}) {
            const int dim = (k == OpKind::ScalarLaplacian ? 1 : 2) * 94;
            const VectorXd v = random_coeff(dim, 100 + mode);
            const VectorXd w = mode_restrict(m, k, mode, mode_lift(m, k, mode, v));
            CHECK((w - v).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("banded assembly reproduces the full operator application") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 128, 16);
    for (OpKind k : {OpKind::ScalarLaplacian, OpKind::HodgeLaplacian, OpKind::DivLRing,
                     OpKind::Lichnerowicz}) {
        for (int mode : {0, 2}) {
            const AssembledOperator op = assemble_operator(m, k, mode);
            CHECK(op.comb_leak <= 1e-11);
            const VectorXd v = random_coeff(op.dim(), 7);
            const VectorXd direct =
                mode_restrict(m, k, mode, laplacian(m, k, mode_lift(m, k, mode, v)));
            const VectorXd via = op.matrix * v;
            const double scale = direct.cwiseAbs().maxCoeff();
            CHECK((via - direct).cwiseAbs().maxCoeff() <= 1e-11 * scale);
        }
    }
}

TEST_CASE("weighted matrices are symmetric") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 192, 16);
    for (OpKind k : {OpKind::ScalarLaplacian, OpKind::HodgeLaplacian, OpKind::DivLRing,
                     OpKind::Lichnerowicz}) {
        for (int mode : {0, 1, 4}) {
            const AssembledOperator op = assemble_operator(m, k, mode);
            CHECK(op.symmetry_defect <= 1e-8);
        }
    }
}

TEST_CASE("quadratic form matches the 2D inner product") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 96, 16);
    for (OpKind k : {OpKind::ScalarLaplacian, OpKind::HodgeLaplacian, OpKind::Lichnerowicz}) {
        const int mode = 2;
        const AssembledOperator op = assemble_operator(m, k, mode);
        const VectorXd v = random_coeff(op.dim(), 55);
        const TensorField u = mode_lift(m, k, mode, v);
        const double full = l2_inner_product(m, laplacian(m, k, u), u);
        const double red = v.dot(op.weight.asDiagonal() * (op.matrix * v));
        CHECK(red == doctest::Approx(full).epsilon(1e-11));
    }
}

TEST_CASE("scalar mode matrix against the separated closed form") {
    // ghat == 1 collar: B = e^{2t}; for f = v(t) cos(m theta),
    // Delta f = (-(v'' + v') + m^2 e^{-2t} v) cos(m theta)
    GhatProfile p{[](double) { return 1.0; }, [](double) { return 0.0; }};
    const int mode = 3;
    const double t0 = 0.5, t1 = 8.0, L = t1 - t0;
    double prev = 1e9;
    for (int nt : {256, 512}) {
        const SurfaceModel m = build_collar_metric(p, t0, t1, nt, 16);
        const AssembledOperator op = assemble_operator(m, OpKind::ScalarLaplacian, mode);
        VectorXd v(op.dim()), expect(op.dim());
        for (int i = 0; i < op.dim(); ++i) {
            const double t = m.chart().t()[i + 1];
            const double x = M_PI * (t - t0) / L;
            v[i] = std::sin(x) * std::sin(x);
            const double d1 = M_PI / L * std::sin(2.0 * x);
            const double d2 = 2.0 * M_PI * M_PI / (L * L) * std::cos(2.0 * x);
            expect[i] = -(d2 + d1) + mode * mode * std::exp(-2.0 * t) * v[i];
        }
        const double err = (op.matrix * v - expect).cwiseAbs().maxCoeff();
        if (nt > 256) CHECK(err <= prev / 3.0);
        prev = err;
    }
    CHECK(prev <= 1e-4);
}

TEST_CASE("harmonic one forms are near-kernel vectors of the Hodge block") {
    const int n = 2;
    const SurfaceModel m = build_hyperbolic_disk(0.3, 10.0, 512, 16);
    const AssembledOperator op = assemble_operator(m, OpKind::HodgeLaplacian, n);
    const VectorXd v = mode_restrict(m, OpKind::HodgeLaplacian, n, harmonic_oneform(n, m));
    const VectorXd res = op.matrix * v;
    // away from the Dirichlet walls the residual is discretization noise
    double mid = 0.0;
    const int ni = op.interior;
    for (int b = 0; b < 2; ++b)
        for (int i = ni / 4; i < 3 * ni / 4; ++i)
            mid = std::max(mid, std::abs(res[b * ni + i]));
    CHECK(mid <= 1e-3 * v.cwiseAbs().maxCoeff());
}

TEST_CASE("scalar Dirichlet bottom sits above the hyperbolic threshold 1/4") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 256, 8);
    for (int mode : {0, 1}) {
        const AssembledOperator op = assemble_operator(m, OpKind::ScalarLaplacian, mode);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(op.symmetrized(), Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()[0] >= 0.245);
    }
}

TEST_CASE("COO export writes every nonzero once") {
    MatrixXd A(2, 3);
    A << 1.5, 0.0, -2.25, 0.0, 3.0, 1e-18;
    const std::string path = "coo_test.csv";
    write_matrix_coo(path, A, 1e-15);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "row,col,value");
    int count = 0;
    std::string line;
    double sum = 0;
    while (std::getline(in, line)) {
        int r, c;
        double val;
        CHECK(std::sscanf(line.c_str(), "%d,%d,%lf", &r, &c, &val) == 3);
        sum += val;
        ++count;
    }
    CHECK(count == 3);
    CHECK(sum == doctest::Approx(1.5 - 2.25 + 3.0));
    std::remove(path.c_str());
}

TEST_CASE("invalid modes and kinds are rejected") {
    const SurfaceModel m = build_hyperbolic_disk(0.5, 8.0, 64, 8);
    CHECK_THROWS_AS(assemble_operator(m, OpKind::ScalarLaplacian, 4), UsageError);
    CHECK_THROWS_AS(assemble_operator(m, OpKind::ScalarLaplacian, -1), UsageError);
    CHECK_THROWS_AS(assemble_operator(m, OpKind::DeltaK, 0), UsageError);
}
