#include <doctest.h>

#include <cmath>
#include <random>

#include "sectorial/error.hpp"
#include "sectorial/funcalc.hpp"
#include "test_support.hpp"

using namespace sectorial;
using testing_support::maxabs;

namespace {

const double two_pi = 2.0 * pi;

ComplexMatrix diag(std::initializer_list<cplx> v) {
    ComplexMatrix D = ComplexMatrix::Zero(v.size(), v.size());
    int i = 0;
    for (auto x : v) D(i, i) = x, ++i;
    return D;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const NumericError& e) {
        return e.kind();
    }
    return ErrorKind::InvalidParameters;
}

} // namespace

TEST_CASE("sectorial_projection: examples") {
    auto r = sectorial_projection(diag({1.0, -1.0}), {-pi / 2, pi / 2});
    CHECK(maxabs(r.result - diag({1.0, 0.0})) < 1e-10);
    CHECK(r.quadrature_residual <= 1e-12);

    r = sectorial_projection(ComplexMatrix::Identity(3, 3), {pi / 4, 3 * pi / 4});
    CHECK(maxabs(r.result) < 1e-10);

    ComplexMatrix N(2, 2);
    N << 0.0, 1.0, 0.0, 0.0;
    r = sectorial_projection(N, {0.3, 2.0});
    CHECK(maxabs(r.result) < 1e-10);
}

TEST_CASE("sectorial_projection: spectrum on a cut is rejected") {
    CHECK(kind_of([] { sectorial_projection(diag({1.0, 2.0}), {0.0, 1.0}); }) == ErrorKind::SpectrumOnCut);
    CHECK(kind_of([] { sectorial_projection(diag({1.0, 2.0}), {1.0, 0.5}); }) == ErrorKind::BadParameters);
}

TEST_CASE("log_theta: examples") {
    auto r = log_theta(diag({std::exp(1.0), 1.0}), {pi});
    CHECK(maxabs(r.result - diag({1.0, 0.0})) < 1e-9);

    ComplexMatrix J(2, 2);
    J << 1.0, 1.0, 0.0, 1.0;
    r = log_theta(J, {pi});
    ComplexMatrix L(2, 2);
    L << 0.0, 1.0, 0.0, 0.0;
    CHECK(maxabs(r.result - L) < 1e-9);
    CHECK(maxabs(matexp_oracle(r.result) - J) < 1e-9);

    r = log_theta(diag({1.0, -1.0}), {-pi / 2});
    CHECK(maxabs(r.result - diag({cplx(0, -two_pi), cplx(0, -pi)})) < 1e-9);
}

TEST_CASE("log_theta: singular input is rejected") {
    CHECK(kind_of([] { log_theta(diag({0.0, 1.0}), {pi}); }) == ErrorKind::SingularOperator);
    CHECK(kind_of([] { log_theta(diag({-1.0, 1.0}), {pi}); }) == ErrorKind::SpectrumOnCut);
}

TEST_CASE("log_theta: exp recovers random admissible matrices") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(-2.5, 2.5), mod(0.5, 2.0);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<cplx> ev;
        for (int k = 0; k < 6; ++k) ev.push_back(std::polar(mod(rng), ang(rng)));
        ComplexMatrix A = testing_support::with_spectrum(rng, ev);
        auto r = log_theta(A, {pi});
        CHECK(opnorm2(matexp_oracle(r.result) - A) <= 1e-6 * opnorm2(A));
    }
}

TEST_CASE("log_difference_projection: examples") {
    auto r = log_difference_projection(diag({1.0, -1.0}), {-pi / 2, pi / 2});
    CHECK(maxabs(r.result - diag({1.0, 0.0})) < 1e-9);
    r = log_difference_projection(ComplexMatrix::Identity(2, 2), {pi / 4, 3 * pi / 4});
    CHECK(maxabs(r.result) < 1e-9);

    std::mt19937_64 rng(17);
    std::vector<cplx> ev;
    std::uniform_real_distribution<double> mod(0.5, 2.0);
    for (double a : {0.2, 0.8, 1.5, 2.4, 3.0, -0.7, -1.6, -2.6}) ev.push_back(std::polar(mod(rng), a));
    ComplexMatrix A = testing_support::with_spectrum(rng, ev);
    const SectorPair sec{-0.3, 1.9};
    CHECK(opnorm2(log_difference_projection(A, sec).result - sectorial_projection(A, sec).result) < 1e-6);
}

TEST_CASE("projection_eigoracle: examples") {
    CHECK(maxabs(projection_eigoracle(diag({I_unit, -I_unit, 1.0}), {pi / 4, 3 * pi / 4}) - diag({1.0, 0.0, 0.0})) <
          1e-10);
    CHECK(maxabs(projection_eigoracle(diag({0.0, 2.0}), {-pi / 2, pi / 2}) - diag({0.0, 1.0})) < 1e-10);
    std::mt19937_64 rng(2);
    ComplexMatrix M = testing_support::random_matrix(rng, 6);
    ComplexMatrix H = M + M.adjoint();
    ComplexMatrix P = projection_eigoracle(H, {-pi / 2, pi / 2});
    CHECK(maxabs(P - P.adjoint()) < 1e-8);
}

TEST_CASE("sectorial_projection: idempotent, commuting, matches the eigen oracle") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> mod(0.4, 2.5), off(0.1, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        const SectorPair sec{-1.0 + 0.3 * trial, 1.2 + 0.3 * trial};
        std::vector<cplx> ev;
        const int n = 4 + 2 * trial;
        for (int k = 0; k < n; ++k) {
            // keep every eigenvalue at least 0.1 rad from both rays
            const double a = (k % 2 == 0) ? sec.theta + 0.1 + (sec.phi - sec.theta - 0.2) * off(rng)
                                          : sec.phi + 0.1 + (2 * pi - (sec.phi - sec.theta) - 0.2) * off(rng);
            ev.push_back(std::polar(mod(rng), std::min(a, sec.theta + 2 * pi - 0.1)));
        }
        ComplexMatrix A = testing_support::with_spectrum(rng, ev);
        ComplexMatrix P = sectorial_projection(A, sec).result;
        CHECK(opnorm2(P * P - P) <= 1e-6);
        CHECK(opnorm2(P * A - A * P) <= 1e-6);
        CHECK(opnorm2(P - projection_eigoracle(A, sec)) <= 1e-6);
    }
}

TEST_CASE("sectorial_projection: normal input gives an orthogonal projection") {
    std::mt19937_64 rng(8);
    ComplexMatrix M = testing_support::random_matrix(rng, 7);
    ComplexMatrix H = M + M.adjoint();
    ComplexMatrix P = sectorial_projection(H, {-pi / 2, pi / 2}).result;
    CHECK(maxabs(P - P.adjoint()) <= 1e-8);
}

TEST_CASE("complementary sectors sum to identity minus the zero-eigenspace projector") {
    std::mt19937_64 rng(31);
    ComplexMatrix A = testing_support::with_spectrum(rng, {cplx(1, 1), cplx(-2, 0.5), cplx(0.5, -1.5), cplx(1.2, -0.2)});
    ComplexMatrix S = sectorial_projection(A, {0.3, 2.0}).result + sectorial_projection(A, {2.0, 0.3 + 2 * pi}).result;
    CHECK(opnorm2(S - ComplexMatrix::Identity(4, 4)) < 1e-8);

    ComplexMatrix B = testing_support::with_spectrum(rng, {0.0, cplx(1, 1), cplx(-2, 0.5), cplx(0.5, -1.5)});
    ComplexMatrix E0 = ComplexMatrix::Zero(4, 4);
    for (const auto& p : eig_oracle(B))
        if (std::abs(p.eigenvalue) < 1e-8) E0 += p.projector;
    ComplexMatrix T = sectorial_projection(B, {0.3, 2.0}).result + sectorial_projection(B, {2.0, 0.3 + 2 * pi}).result;
    CHECK(opnorm2(T - (ComplexMatrix::Identity(4, 4) - E0)) < 1e-8);
}

TEST_CASE("verify_keyhole: three integrand families") {
    const SectorPair sec{-0.5, 1.8};
    const cplx a = std::polar(1.3, 0.6);
    CHECK(verify_keyhole([&](const ContourNode& n) {
        ComplexMatrix m(1, 1);
        m(0, 0) = 1.0 / ((a - n.z) * (a - n.z));
        return m;
    }, sec) <= 1e-10);
    CHECK(verify_keyhole([&](const ContourNode& n) {
        ComplexMatrix m(1, 1);
        m(0, 0) = 1.0 / (n.z * n.z);
        return m;
    }, sec) <= 1e-10);

    std::mt19937_64 rng(4);
    ComplexMatrix A = testing_support::with_spectrum(rng, {cplx(1, 1), cplx(-2, 0.5), cplx(0.5, -1.5), cplx(1.2, 0.3)});
    ComplexMatrix x = testing_support::random_matrix(rng, 4).col(0);
    const ComplexMatrix Id = ComplexMatrix::Identity(4, 4);
    CHECK(verify_keyhole([&](const ContourNode& n) {
        return ComplexMatrix(A * lu_solve(A - n.z * Id, x) / n.z);
    }, sec) <= 1e-8);
}

TEST_CASE("truncated_loop_limit_check") {
    auto one = truncated_loop_limit_check(1.0, {pi}, {10.0});
    REQUIRE(one.size() == 1);
    CHECK(one[0].difference <= 1e-8);
    // at s = 1 the bracket collapses to 2 pi i e^{-i theta} / N
    CHECK(std::abs(one[0].closed_form - cplx(0, two_pi) * std::exp(cplx(0, -pi)) / 10.0) < 1e-13);

    auto half = truncated_loop_limit_check(0.5, {pi}, {10.0, 100.0, 1000.0});
    for (const auto& s : half) CHECK(s.difference <= 1e-8);
    CHECK(std::abs(half[1].quadrature) < std::abs(half[0].quadrature));
    CHECK(std::abs(half[2].quadrature) < std::abs(half[1].quadrature));
    for (const auto& s : half) {
        const double envelope = std::abs(s.closed_form) / (std::pow(s.N, -0.5) * std::log(s.N));
        CHECK(envelope > 1.0);
        CHECK(envelope < 10.0);
    }

    // additivity: full loop minus the short loop equals the two radial tails
    const double th = 0.4, r0 = 0.5, N1 = 3.0, N2 = 50.0;
    auto f = [](const ContourNode& n) { return std::exp(-2.0 * n.log_z) * n.log_z; };
    const cplx full = integrate_scalar(build_contour(LaurentLoop{th, r0, N2}, {16, 10, 1e-14}), f);
    const cplx part = integrate_scalar(build_contour(LaurentLoop{th, r0, N1}, {16, 10, 1e-14}), f);
    const cplx tails = integrate_scalar(
        contour_from_legs({RadialLeg{th, N2, N1}, RadialLeg{th - two_pi, N1, N2}}, {16, 10, 1e-14}), f);
    CHECK(std::abs(full - part - tails) < 1e-12);
}
