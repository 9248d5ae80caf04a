#include "sectorial/funcalc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sectorial/error.hpp"

namespace sectorial {

namespace {

constexpr double two_pi = 2.0 * pi;

struct SpectrumInfo {
    std::vector<cplx> values;
    double rho = 0.0;
    double min_nonzero = 0.0;   // 0 if none
    double zero_tol = 0.0;
    bool has_zero = false;
    double norm = 0.0;
};

SpectrumInfo inspect(const ComplexMatrix& A) {
    SpectrumInfo s;
    s.values = eigenvalues(A);
    s.norm = opnorm2(A);
    s.zero_tol = 1e-10 * std::max(1.0, s.norm);
    for (auto z : s.values) {
        const double m = std::abs(z);
        s.rho = std::max(s.rho, m);
        if (m <= s.zero_tol) {
            s.has_zero = true;
        } else if (s.min_nonzero == 0.0 || m < s.min_nonzero) {
            s.min_nonzero = m;
        }
    }
    return s;
}

void check_ray(const SpectrumInfo& s, double angle, double margin) {
    for (auto z : s.values) {
        if (std::abs(z) <= s.zero_tol) continue;
        if (std::abs(std::remainder(std::arg(z) - angle, two_pi)) < margin) {
            std::ostringstream os;
            os << "eigenvalue " << z << " within " << margin << " rad of the ray at angle " << angle;
            fail(ErrorKind::SpectrumOnCut, os.str());
        }
    }
}

struct Radii {
    double r0;
    double R;
};

Radii choose_radii(const SpectrumInfo& s, const FuncalcConfig& cfg) {
    Radii r{};
    r.r0 = cfg.r0 ? *cfg.r0 : (s.min_nonzero > 0.0 ? 0.5 * s.min_nonzero : 1.0);
    if (s.min_nonzero > 0.0 && s.min_nonzero <= r.r0) {
        fail(ErrorKind::BadParameters, "r0 must stay below every nonzero eigenvalue modulus");
    }
    if (cfg.R) {
        r.R = *cfg.R;
    } else {
        r.R = 4.0 * std::max(s.rho, r.r0);
        while (s.norm * (1.0 + std::abs(std::log(r.R))) / r.R > cfg.tail_tol) r.R *= 10.0;
    }
    if (!(r.R > r.r0)) fail(ErrorKind::BadParameters, "R must exceed r0");
    return r;
}

QuadratureConfig tail_quadrature(QuadratureConfig q) {
    q.rel_tol = std::max(q.rel_tol, 1e-3);
    return q;
}

} // namespace

CalculusReport sectorial_projection(const ComplexMatrix& A, SectorPair sector, const FuncalcConfig& cfg) {
    require_square_finite(A, "sectorial_projection");
    sector.validate();
    const auto spec = inspect(A);
    check_ray(spec, sector.theta, cfg.angular_margin);
    check_ray(spec, sector.phi, cfg.angular_margin);
    const auto [r0, R] = choose_radii(spec, cfg);

    const auto n = A.rows();
    const ComplexMatrix Id = ComplexMatrix::Identity(n, n);
    // both integrands side by side: [lambda^{-1} A (A - lambda)^{-1}, (A - lambda)^{-1}]
    const MatrixIntegrand f = [&](const ContourNode& node) {
        const ComplexMatrix X = lu_solve(A - node.z * Id, Id);
        ComplexMatrix out(n, 2 * n);
        out.leftCols(n) = (A * X) / node.z;
        out.rightCols(n) = X;
        return out;
    };

    const auto contour = build_contour(Sectorial{sector.theta, sector.phi, r0, R}, cfg.quadrature);
    const auto main = integrate_report(contour, f);
    const auto tail_contour = contour_from_legs(
        {RadialLeg{sector.phi, 2.0 * R, R}, RadialLeg{sector.theta, R, 2.0 * R}}, tail_quadrature(cfg.quadrature));
    const auto tail = integrate_report(tail_contour, f);

    const cplx c = I_unit / two_pi;
    const ComplexMatrix total = main.value + tail.value;
    ComplexMatrix P1 = c * total.leftCols(n);
    ComplexMatrix P2 = c * total.rightCols(n) + ((sector.phi - sector.theta) / two_pi) * Id;

    CalculusReport rep{P1, contour, 0.0, 0.0, 0.0};
    rep.quadrature_residual = main.scale > 0.0 ? main.residual / main.scale : 0.0;
    rep.truncation_estimate = opnorm2(c * tail.value.leftCols(n));
    rep.forms_difference = opnorm2(P1 - P2);
    if (rep.forms_difference > 10.0 * cfg.quadrature.rel_tol * std::max(1.0, opnorm2(P1))) {
        std::ostringstream os;
        os << "lambda^{-1}A(A-lambda)^{-1} and resolvent forms differ by " << rep.forms_difference;
        fail(ErrorKind::FormsDisagree, os.str());
    }
    return rep;
}

CalculusReport log_theta(const ComplexMatrix& A, BranchAngle cut, const FuncalcConfig& cfg) {
    require_square_finite(A, "log_theta");
    const auto spec = inspect(A);
    if (spec.has_zero) fail(ErrorKind::SingularOperator, "log_theta needs an invertible operator");
    check_ray(spec, cut.theta, cfg.angular_margin);
    const auto [r0, R] = choose_radii(spec, cfg);

    const auto n = A.rows();
    const ComplexMatrix Id = ComplexMatrix::Identity(n, n);
    const MatrixIntegrand f = [&](const ContourNode& node) {
        const ComplexMatrix X = lu_solve(A - node.z * Id, Id);
        return ComplexMatrix((node.log_z / node.z) * (A * X));
    };

    const auto contour = build_contour(LaurentLoop{cut.theta, r0, R}, cfg.quadrature);
    const auto main = integrate_report(contour, f);
    const auto tail_contour = contour_from_legs(
        {RadialLeg{cut.theta, 2.0 * R, R}, RadialLeg{cut.theta - two_pi, R, 2.0 * R}}, tail_quadrature(cfg.quadrature));
    const auto tail = integrate_report(tail_contour, f);

    const cplx c = I_unit / two_pi;
    CalculusReport rep{c * (main.value + tail.value), contour, 0.0, 0.0, 0.0};
    rep.quadrature_residual = main.scale > 0.0 ? main.residual / main.scale : 0.0;
    rep.truncation_estimate = opnorm2(c * tail.value);
    return rep;
}

CalculusReport log_difference_projection(const ComplexMatrix& A, SectorPair sector, const FuncalcConfig& cfg) {
    sector.validate();
    const auto a = log_theta(A, BranchAngle{sector.theta}, cfg);
    const auto b = log_theta(A, BranchAngle{sector.phi}, cfg);
    CalculusReport rep{(I_unit / two_pi) * (a.result - b.result), a.contour, 0.0, 0.0, 0.0};
    rep.quadrature_residual = std::max(a.quadrature_residual, b.quadrature_residual);
    rep.truncation_estimate = (a.truncation_estimate + b.truncation_estimate) / two_pi;
    return rep;
}

ComplexMatrix projection_eigoracle(const ComplexMatrix& A, SectorPair sector) {
    sector.validate();
    const auto parts = eig_oracle(A);
    const double zero_tol = 1e-10 * std::max(1.0, opnorm2(A));
    ComplexMatrix P = ComplexMatrix::Zero(A.rows(), A.cols());
    for (const auto& part : parts) {
        if (std::abs(part.eigenvalue) <= zero_tol) continue;
        double a = std::fmod(std::arg(part.eigenvalue) - sector.theta, two_pi);
        if (a < 0.0) a += two_pi;
        a += sector.theta;
        if (a > sector.theta && a < sector.phi) P += part.projector;
    }
    return P;
}

double verify_keyhole(const MatrixIntegrand& f, SectorPair sector, const KeyholeConfig& cfg) {
    sector.validate();
    const auto loop_theta = build_contour(LaurentLoop{sector.theta, cfg.r0, cfg.R}, cfg.quadrature);
    const auto loop_phi = build_contour(LaurentLoop{sector.phi, cfg.r0, cfg.R}, cfg.quadrature);
    const auto gamma = build_contour(Sectorial{sector.theta, sector.phi, cfg.r0, cfg.R}, cfg.quadrature);
    const MatrixIntegrand with_log = [&](const ContourNode& node) { return ComplexMatrix(node.log_z * f(node)); };
    const ComplexMatrix Lt = integrate(loop_theta, with_log);
    const ComplexMatrix Lp = integrate(loop_phi, with_log);
    const ComplexMatrix G = integrate(gamma, f);
    return opnorm2(Lt - Lp + (2.0 * pi * I_unit) * G);
}

std::vector<LoopLimitSample> truncated_loop_limit_check(double s, BranchAngle cut, const std::vector<double>& N_list,
                                                        double r0, const QuadratureConfig& quad) {
    if (!(s > 0.0)) fail(ErrorKind::BadParameters, "truncated_loop_limit_check needs s > 0");
    auto F = [s](cplx L) { return -(1.0 / (s * s)) * std::exp(-s * L) * (1.0 + s * L); };
    std::vector<LoopLimitSample> out;
    for (double N : N_list) {
        const auto loop = build_contour(LaurentLoop{cut.theta, r0, N}, quad);
        const cplx q = integrate_scalar(loop, [s](const ContourNode& node) {
            return std::exp((-s - 1.0) * node.log_z) * node.log_z;
        });
        const cplx L_end{std::log(N), cut.theta - two_pi};
        const cplx L_start{std::log(N), cut.theta};
        const cplx closed = F(L_end) - F(L_start);
        out.push_back({N, q, closed, std::abs(q - closed)});
    }
    return out;
}

} // namespace sectorial
