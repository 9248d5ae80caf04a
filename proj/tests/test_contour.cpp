#include <doctest.h>

#include <cmath>
#include <random>

#include "sectorial/contour.hpp"
#include "sectorial/error.hpp"
#include "test_support.hpp"

using namespace sectorial;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const NumericError& e) {
        return e.kind();
    }
    return ErrorKind::InvalidParameters;   // sentinel: nothing thrown
}

const double two_pi = 2.0 * pi;

} // namespace

TEST_CASE("arg_branch interval convention") {
    CHECK(arg_branch(1.0, {pi}) == doctest::Approx(0.0));
    CHECK(arg_branch(I_unit, {0.0}) == doctest::Approx(-1.5 * pi));
    CHECK(kind_of([] { arg_branch(-1.0, {pi}); }) == ErrorKind::OnCut);
    CHECK(kind_of([] { arg_branch(0.0, {pi}); }) == ErrorKind::OnCut);
    // stays strictly inside (theta - 2 pi, theta)
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const cplx z{u(rng), u(rng)};
        const double th = u(rng);
        const double a = arg_branch(z, {th});
        CHECK(a < th);
        CHECK(a > th - two_pi);
        CHECK(std::abs(std::polar(std::abs(z), a) - z) < 1e-12 * std::abs(z));
    }
}

TEST_CASE("log_branch and pow_branch") {
    CHECK(std::abs(log_branch(std::exp(1.0), {pi}) - 1.0) < 1e-15);
    CHECK(std::abs(log_branch(-1.0, {pi / 2}) - cplx(0, -pi)) < 1e-15);
    CHECK(std::abs(log_branch(1.0, {-pi / 2}) - cplx(0, -two_pi)) < 1e-15);
    CHECK(std::abs(pow_branch(4.0, 0.5, {pi}) - 2.0) < 1e-15);
    const double s = 0.3;
    CHECK(std::abs(pow_branch(1.0, -s, {-pi / 2}) - std::exp(cplx(0, two_pi * s))) < 1e-14);
    CHECK(kind_of([] { pow_branch(0.0, 0.5, {0.3}); }) == ErrorKind::OnCut);
}

TEST_CASE("log_branch across two neighbouring cuts differs by 2 pi i") {
    const double th = 0.7;
    for (double a : {0.8, 2.0, 4.0, 6.9}) {
        const cplx z = std::polar(1.7, a);
        CHECK(std::abs(log_branch(z, {th}) - log_branch(z, {th - two_pi}) - cplx(0, two_pi)) < 1e-14);
        CHECK(std::abs(std::exp(log_branch(z, {th})) - z) < 1e-14);
    }
}

TEST_CASE("build_contour parameter validation") {
    CHECK(kind_of([] { build_contour(LaurentLoop{0.0, 0.0, 1.0}); }) == ErrorKind::BadParameters);
    CHECK(kind_of([] { build_contour(LaurentLoop{0.0, 2.0, 1.0}); }) == ErrorKind::BadParameters);
    CHECK(kind_of([] { build_contour(Sectorial{0.0, 7.0, 0.5, 2.0}); }) == ErrorKind::BadParameters);
    CHECK(kind_of([] { build_contour(Sectorial{1.0, 0.5, 0.5, 2.0}); }) == ErrorKind::BadParameters);
    CHECK(kind_of([] { build_contour(Circle{0.0, -1.0}); }) == ErrorKind::BadParameters);
}

TEST_CASE("nodes lie on their legs") {
    const auto c = build_contour(Sectorial{-0.4, 2.0, 0.3, 50.0});
    for (const auto& n : c.nodes(1)) {
        const double r = std::abs(n.z);
        const bool on_arc = std::abs(r - 0.3) < 1e-12;
        const bool on_ray = std::abs(std::remainder(std::arg(n.z) + 0.4, two_pi)) < 1e-12 ||
                            std::abs(std::remainder(std::arg(n.z) - 2.0, two_pi)) < 1e-12;
        CHECK((on_arc || on_ray));
        CHECK(std::abs(std::exp(n.log_z) - n.z) < 1e-12 * r);
    }
}

TEST_CASE("residue examples") {
    const auto unit = build_contour(Circle{0.0, 1.0});
    CHECK(std::abs(integrate_scalar(unit, [](const ContourNode& n) { return 1.0 / n.z; }) - cplx(0, two_pi)) < 1e-12);
    const auto shifted = build_contour(Circle{5.0, 1.0});
    CHECK(std::abs(integrate_scalar(shifted, [](const ContourNode& n) { return 1.0 / (n.z - 5.0); }) - cplx(0, two_pi)) <
          1e-12);
}

TEST_CASE("sectorial contour: integral of 1/lambda is i(theta - phi) for every truncation") {
    const double th = -0.3, ph = 2.1;
    for (double R : {2.0, 1e3, 1e9}) {
        const auto c = build_contour(Sectorial{th, ph, 0.25, R});
        const cplx v = integrate_scalar(c, [](const ContourNode& n) { return 1.0 / n.z; });
        CHECK(std::abs(v - cplx(0, th - ph)) < 1e-10);
    }
}

TEST_CASE("Laurent loop: lambda^{-s-1} log lambda against its antiderivative") {
    for (double s : {0.5, 1.0, 1.7}) {
        const double th = 2.5, N = 40.0;
        const auto c = build_contour(LaurentLoop{th, 0.5, N}, {16, 10, 1e-14});
        const cplx q = integrate_scalar(c, [s](const ContourNode& n) {
            return std::exp((-s - 1.0) * n.log_z) * n.log_z;
        });
        auto F = [s](cplx L) { return -(1.0 / (s * s)) * std::exp(-s * L) * (1.0 + s * L); };
        const cplx closed = F(cplx(std::log(N), th - two_pi)) - F(cplx(std::log(N), th));
        CHECK(std::abs(q - closed) < 1e-10);
    }
}

TEST_CASE("orientation reversal negates") {
    const auto c = build_contour(LaurentLoop{1.0, 0.4, 30.0});
    auto f = [](const ContourNode& n) { return n.log_z / ((n.z - cplx(2.0, -1.0)) * (n.z - cplx(2.0, -1.0))); };
    const cplx a = integrate_scalar(c, f);
    const cplx b = integrate_scalar(c.reversed(), f);
    CHECK(std::abs(a + b) < 1e-12 * std::max(1.0, std::abs(a)));
}

TEST_CASE("Cauchy theorem on polynomials") {
    const auto c = build_contour(Circle{cplx(1.0, 2.0), 3.0});
    const cplx v = integrate_scalar(c, [](const ContourNode& n) { return 1.0 + n.z * (3.0 - n.z * n.z * n.z); });
    CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("Laurent loop: single-valued decaying f reduces to the arc") {
    const double th = 0.9, r0 = 0.5, R = 1e6;
    const auto loop = build_contour(LaurentLoop{th, r0, R});
    const auto arc = contour_from_legs({ArcLeg{0.0, r0, th, th - two_pi}});
    auto f = [](const ContourNode& n) { return 1.0 / ((n.z - 3.0) * (n.z + cplx(0, 2.0))); };
    CHECK(std::abs(integrate_scalar(loop, f) - integrate_scalar(arc, f)) < 1e-12);
}

TEST_CASE("integrate reports NoConvergence") {
    const auto c = build_contour(Circle{0.0, 1.0}, {4, 1, 1e-14});
    auto f = [](const ContourNode& n) {
        ComplexMatrix m(1, 1);
        m(0, 0) = 1.0 / (n.z - 0.999);
        return m;
    };
    CHECK(kind_of([&] { integrate(c, f); }) == ErrorKind::NoConvergence);
}
