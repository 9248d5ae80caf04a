#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "sectorial/blockdirichlet.hpp"
#include "sectorial/error.hpp"
#include "test_support.hpp"

using namespace sectorial;
using testing_support::maxabs;

namespace {

ComplexMatrix scalar(double v) { return ComplexMatrix::Constant(1, 1, v); }

ProductModel scalar_model() { return product_model_from(scalar(1.0), scalar(3.0)); }

std::vector<ProductModel> models() {
    return {scalar_model(), build_product_model(2, 2, 1.0), build_product_model(3, 3, 1.0),
            build_product_model(4, 2, 2.5), build_product_model(1, 5, 0.7)};
}

double min_eig(const ComplexMatrix& X) {
    return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(X, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

} // namespace

TEST_CASE("build_product_model: scalar example") {
    const auto m = scalar_model();
    CHECK(std::abs(m.B(0, 0) - 4.0) == 0.0);
    CHECK(std::abs(m.B1(0, 0) - std::sqrt(17.0)) < 1e-14);
    ComplexMatrix A(2, 2);
    A << 4, 1, 1, -4;
    CHECK(maxabs(m.A - A) == 0.0);

    const auto g = build_product_model(1, 1, 2.0 * std::sqrt(2.0 / 3.0));
    CHECK(std::abs(g.T1d(0, 0) - 3.0) < 1e-14);
    CHECK(std::abs(g.S(0, 0) - 1.0) == 0.0);
}

TEST_CASE("build_product_model: structure") {
    for (const auto& m : models()) {
        CHECK(maxabs(m.B * m.S_full - m.S_full * m.B) == 0.0);
        CHECK(maxabs(m.B1 * m.B1 - m.B * m.B - m.S_full * m.S_full) < 1e-10 * std::max(1.0, maxabs(m.B * m.B)));
        CHECK(maxabs(m.A - m.A.adjoint()) == 0.0);
        CHECK(min_eig(m.S) > 0.0);
        CHECK(min_eig(m.T1d) > 0.0);
        CHECK(min_eig(m.B) > 0.0);
        CHECK(min_eig(m.B1) > 0.0);
        CHECK(maxabs(m.B1 * m.B1_inv - ComplexMatrix::Identity(m.half_dim(), m.half_dim())) < 1e-12);
    }
    CHECK_THROWS_AS(build_product_model(0, 2, 1.0), NumericError);
}

TEST_CASE("block_resolvent: closed form against the direct inverse") {
    const auto s = scalar_model();
    ComplexMatrix direct = lu_solve(s.A - I_unit * ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2));
    CHECK(maxabs(block_resolvent(s, I_unit) - direct) < 1e-14);

    for (const auto& m : models()) {
        const auto n = m.A.rows();
        const ComplexMatrix I = ComplexMatrix::Identity(n, n);
        for (double w : {pi / 4, -pi / 4, 3 * pi / 4, -3 * pi / 4})
            for (double rho : {0.1, 1.0, 10.0, 300.0}) {
                const cplx lam = std::polar(rho, w);
                CHECK(maxabs(block_resolvent(m, lam) - lu_solve(m.A - lam * I, I)) < 1e-10);
                const auto h = m.half_dim();
                const ComplexMatrix Ih = ComplexMatrix::Identity(h, h);
                const ComplexMatrix lhs = lu_solve(lam * lam * Ih - m.B1 * m.B1, Ih);
                CHECK(maxabs(block_lambda_factor(m, lam) - lhs) < 1e-10);
            }
        // lambda = 0
        CHECK(maxabs(block_resolvent(m, 0.0) - lu_solve(m.A, I)) < 1e-10);
    }
    CHECK_THROWS_AS(block_resolvent(s, std::sqrt(17.0)), NumericError);
    try {
        block_resolvent(s, -std::sqrt(17.0));
    } catch (const NumericError& e) {
        CHECK(e.kind() == ErrorKind::PoleHit);
    }
}

TEST_CASE("block_projection_formula: scalar example") {
    const auto s = scalar_model();
    const double r = std::sqrt(17.0);
    ComplexMatrix expected(2, 2);
    expected << 1 + 4 / r, 1 / r, 1 / r, 1 - 4 / r;
    expected *= 0.5;
    const ComplexMatrix P = block_projection_formula(s);
    CHECK(maxabs(P - expected) < 1e-15);
    Eigen::Vector2cd v(1.0, r - 4.0);
    v.normalize();
    CHECK(maxabs(P - v * v.adjoint()) < 1e-14);
}

TEST_CASE("block_projection_formula: projector properties") {
    for (const auto& m : models()) {
        const ComplexMatrix P = block_projection_formula(m);
        const auto h = m.half_dim();
        CHECK(maxabs(P.topLeftCorner(h, h) + P.bottomRightCorner(h, h) - ComplexMatrix::Identity(h, h)) == 0.0);
        CHECK(maxabs(P * P - P) < 1e-8);
        CHECK(maxabs(P * m.A - m.A * P) < 1e-8 * std::max(1.0, maxabs(m.A)));
        CHECK(maxabs(P - P.adjoint()) < 1e-10);
        CHECK(std::abs(P.trace() - cplx(h)) < 1e-10);

        // range of P = positive eigenvectors of A
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.A);
        const ComplexMatrix Vp = es.eigenvectors().rightCols(h);
        CHECK((es.eigenvalues().tail(h).array() > 0.0).all());
        CHECK(maxabs(P - Vp * Vp.adjoint()) < 1e-6);
    }
}

TEST_CASE("block_projection_crosscheck and the B1 projections") {
    CHECK(block_projection_crosscheck(scalar_model()) <= 1e-8);
    const auto m = build_product_model(3, 3, 1.0);
    CHECK(m.A.rows() == 18);
    CHECK(block_projection_crosscheck(m) <= 1e-6);

    for (const auto& mm : {scalar_model(), m}) {
        const auto h = mm.half_dim();
        const auto plus = sectorial_projection(mm.B1, {-pi / 2, pi / 2});
        const auto minus = sectorial_projection(-mm.B1, {-pi / 2, pi / 2});
        CHECK(maxabs(plus.result - ComplexMatrix::Identity(h, h)) < 1e-8);
        CHECK(maxabs(minus.result) < 1e-8);
    }
    CHECK_THROWS_AS(block_projection_crosscheck(build_product_model(6, 6, 1.0)), NumericError);
}
