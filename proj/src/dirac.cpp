#include "sectorial/dirac.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <gsl/gsl_sf_expint.h>
#include <json.hpp>

#include "sectorial/error.hpp"

namespace sectorial {

namespace {

constexpr double cut_margin = 1e-6;

double norm3(const Xi3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Xi4 extend(const Xi3& v) { return {v[0], v[1], v[2], 0.0}; }

// Displayed matrix of the singular Green term split as C + sigma S + lambda L.
struct SgParts {
    ComplexMatrix C, S, L;
};

SgParts sg_parts(const Xi3& xp) {
    const cplx i = I_unit;
    const double x1 = xp[0], x2 = xp[1], x3 = xp[2];
    SgParts p{ComplexMatrix::Zero(4, 4), ComplexMatrix::Zero(4, 4), ComplexMatrix::Zero(4, 4)};
    p.C << -i * x1, -x2 - i * x3, 0, 0,
           x2 - i * x3, i * x1, 0, 0,
           0, 0, -i * x1, -x2 - i * x3,
           0, 0, x2 - i * x3, i * x1;
    p.S.diagonal() << i, i, -i, -i;
    p.L << 0, 0, -1, 0,
           0, 0, 0, -1,
           -1, 0, 0, 0,
           0, -1, 0, 0;
    return p;
}

double kernel_cutoff(double ar) {
    // e^{-a r cosh v} < 1e-16 beyond v = acosh(37 / (a r))
    return std::acosh(std::max(37.0 / ar, 1.0)) + 1.0;
}

} // namespace

double DiracCovariable::norm() const {
    return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] + xi[3] * xi[3]);
}

double DiracCovariable::tangential_norm() const { return norm3(xi_prime()); }

cplx DiracCovariable::sigma(cplx lambda) const { return dirac_sigma(xi_prime(), lambda); }

cplx dirac_sigma(const Xi3& xi_prime, cplx lambda) {
    const double a = norm3(xi_prime);
    if (std::abs(lambda.real()) <= cut_margin && std::abs(lambda.imag()) >= a - cut_margin)
        fail(ErrorKind::BranchViolation, "lambda on the cuts +-i[|xi'|, inf)");
    const cplx s = std::sqrt(a * a + lambda * lambda);
    if (!(s.real() > 0.0)) fail(ErrorKind::BranchViolation, "Re sigma <= 0");
    return s;
}

ComplexMatrix dirac_symbol(const Xi4& xi) {
    const cplx i = I_unit;
    const double x1 = xi[0], x2 = xi[1], x3 = xi[2], x4 = xi[3];
    ComplexMatrix p(4, 4);
    p << 0, 0, i * x1 - x4, x2 + i * x3,
         0, 0, -x2 + i * x3, -i * x1 - x4,
         i * x1 + x4, x2 + i * x3, 0, 0,
         -x2 + i * x3, -i * x1 + x4, 0, 0;
    return p;
}

ComplexMatrix dirac_resolvent_symbol(const Xi4& xi, cplx lambda) {
    const double n2 = DiracCovariable{xi}.norm() * DiracCovariable{xi}.norm();
    const cplx den = n2 + lambda * lambda;
    if (std::abs(den) <= 1e-13 * std::max(1.0, n2)) fail(ErrorKind::PoleHit, "lambda = +-i|xi|");
    const cplx i = I_unit;
    const double x1 = xi[0], x2 = xi[1], x3 = xi[2], x4 = xi[3];
    const cplx l = lambda;
    ComplexMatrix q(4, 4);
    q << -l, 0, -i * x1 + x4, -x2 - i * x3,
         0, -l, x2 - i * x3, i * x1 + x4,
         -i * x1 - x4, -x2 - i * x3, -l, 0,
         x2 - i * x3, i * x1 - x4, 0, -l;
    return q / den;
}

ComplexMatrix dirac_projection_closed(const Xi4& xi) {
    const double n = DiracCovariable{xi}.norm();
    if (n == 0.0) fail(ErrorKind::BadParameters, "projection symbol needs xi != 0");
    const cplx i = I_unit;
    const double x1 = xi[0], x2 = xi[1], x3 = xi[2], x4 = xi[3];
    ComplexMatrix m(4, 4);
    m << n, 0, x1 + i * x4, -i * x2 + x3,
         0, n, i * x2 + x3, -x1 + i * x4,
         x1 - i * x4, -i * x2 + x3, n, 0,
         i * x2 + x3, -x1 - i * x4, 0, n;
    return m / (2.0 * n);
}

DiracProjection dirac_projection_symbol(const Xi4& xi, const QuadratureConfig& cfg) {
    DiracProjection out;
    out.closed = dirac_projection_closed(xi);
    const double n = DiracCovariable{xi}.norm();
    const Contour c = build_contour(Circle{I_unit * n, 0.5 * n}, cfg);
    out.quadrature = integrate(c, [&](const ContourNode& node) {
                         return ComplexMatrix(dirac_resolvent_symbol(xi, node.z));
                     }) * (I_unit / (2.0 * pi));
    out.difference = (out.closed - out.quadrature).cwiseAbs().maxCoeff();
    return out;
}

ComplexMatrix dirac_sg_value(const Xi3& xi_prime, cplx lambda, double x, double y) {
    const cplx s = dirac_sigma(xi_prime, lambda);
    const SgParts p = sg_parts(xi_prime);
    return (p.C + s * p.S + lambda * p.L) * (std::exp(-s * (x + y)) / (2.0 * s));
}

ComplexMatrix dirac_free_value(const Xi3& xi_prime, cplx lambda, double z) {
    const cplx s = dirac_sigma(xi_prime, lambda);
    const ComplexMatrix pp = dirac_symbol(extend(xi_prime));
    const ComplexMatrix E = dirac_symbol({0.0, 0.0, 0.0, 1.0});
    const cplx decay = std::exp(-s * std::abs(z));
    const double sgn = (z > 0) - (z < 0);
    ComplexMatrix k = (pp + lambda * ComplexMatrix::Identity(4, 4)) * (decay / (2.0 * s));
    k += E * (0.5 * I_unit * sgn * decay);
    return -k;
}

ComplexMatrix dirac_resolvent_kernel_value(const Xi3& xi_prime, cplx lambda, double x, double y) {
    return dirac_free_value(xi_prime, lambda, x - y) - dirac_sg_value(xi_prime, lambda, x, y);
}

ComplexMatrix dirac_bvp_kernel(const Xi3& xi_prime, cplx lambda, double x, double y) {
    if (x < 0.0 || y <= 0.0 || x == y) fail(ErrorKind::BadParameters, "bvp kernel needs 0 <= x != y, y > 0");
    const ComplexMatrix I4 = ComplexMatrix::Identity(4, 4);
    const ComplexMatrix E = dirac_symbol({0.0, 0.0, 0.0, 1.0});
    const ComplexMatrix pp = dirac_symbol(extend(xi_prime));
    const ComplexMatrix M = I_unit * E * (pp - lambda * I4);

    Eigen::ComplexEigenSolver<ComplexMatrix> es(M);
    const ComplexMatrix Vinv = es.eigenvectors().inverse();
    ComplexMatrix unstable(2, 4);
    int nu = 0;
    for (int k = 0; k < 4; ++k) {
        if (es.eigenvalues()(k).real() > 0.0) {
            if (nu == 2) fail(ErrorKind::BranchViolation, "system is not split 2 + 2");
            unstable.row(nu++) = Vinv.row(k);
        }
    }
    if (nu != 2) fail(ErrorKind::BranchViolation, "system is not split 2 + 2");

    ComplexMatrix Bm = ComplexMatrix::Zero(2, 4);
    Bm << 1, 0, 1, 0,
          0, 1, 0, 1;
    const ComplexMatrix eMy = matexp_oracle(M * y);

    // unknowns c (left data at 0) and d (data just right of y)
    ComplexMatrix A = ComplexMatrix::Zero(8, 8);
    A.block(0, 0, 2, 4) = Bm;
    A.block(2, 0, 4, 4) = -eMy;
    A.block(2, 4, 4, 4) = I4;
    A.block(6, 4, 2, 4) = unstable;
    ComplexMatrix rhs = ComplexMatrix::Zero(8, 4);
    rhs.block(2, 0, 4, 4) = -I_unit * E;
    const ComplexMatrix sol = lu_solve(A, rhs);
    if (x < y) return matexp_oracle(M * x) * sol.topRows(4);
    return matexp_oracle(M * (x - y)) * sol.bottomRows(4);
}

SymbolKernel MatrixSymbolKernel::component(int a, int b) const {
    TangentialCovariable t{{xi_prime[0], xi_prime[1], xi_prime[2]}};
    const int n = grid.n_points;
    SymbolKernel K{grid, ComplexMatrix(n, n), t, 0, nullptr};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) K.values(i, j) = at(i, j)(a, b);
    auto ev = evaluator;
    K.evaluator = [ev, a, b](double x, double y) { return ev(x, y)(a, b); };
    return K;
}

namespace {

MatrixSymbolKernel sample_matrix_kernel(const HalfLineGrid& grid, const Xi3& xp, MatrixPointKernel g) {
    MatrixSymbolKernel K{grid, xp, {}, std::move(g)};
    const int n = grid.n_points;
    K.blocks.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            K.blocks.push_back(K.evaluator(grid.nodes[i], grid.nodes[j]));
            if (!K.blocks.back().allFinite()) fail(ErrorKind::BadParameters, "kernel has non-finite values");
        }
    return K;
}

} // namespace

MatrixSymbolKernel dirac_sg_kernel(const Xi3& xi_prime, cplx lambda, const HalfLineGrid& grid) {
    dirac_sigma(xi_prime, lambda);
    return sample_matrix_kernel(grid, xi_prime, [xi_prime, lambda](double x, double y) {
        return dirac_sg_value(xi_prime, lambda, x, y);
    });
}

ComplexMatrix dirac_sectorial_value(const Xi3& xi_prime, double r, const QuadratureConfig& cfg) {
    const double a = norm3(xi_prime);
    if (!(a > 0.0)) fail(ErrorKind::BadParameters, "sectorial kernel needs xi' != 0");
    if (!(r > 0.0)) fail(ErrorKind::BadParameters, "sectorial kernel needs x + y > 0");
    // t = a sinh v: dt / sigma = dv, sigma = a cosh v, e^{-sigma r} < 1e-16 beyond V
    const double V = kernel_cutoff(a * r);
    const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * V)));
    auto w = [a, r](double v) { return std::exp(-a * r * std::cosh(v)); };
    const cplx J0 = integrate_interval([&](double v) { return cplx(w(v)); }, -V, V, panels, cfg);
    const cplx Jc = integrate_interval([&](double v) { return cplx(a * std::cosh(v) * w(v)); }, -V, V, panels, cfg);
    const cplx Js = integrate_interval([&](double v) { return cplx(a * std::sinh(v) * w(v)); }, -V, V, panels, cfg,
                                       1e-15 * std::abs(Jc));
    const SgParts p = sg_parts(xi_prime);
    const ComplexMatrix integral = (p.C * J0 + p.S * Jc + p.L * Js) * 0.5;
    return integral * (I_unit / (2.0 * pi));
}

MatrixSymbolKernel dirac_sectorial_kernel(const Xi3& xi_prime, const HalfLineGrid& grid, const QuadratureConfig& cfg) {
    return sample_matrix_kernel(grid, xi_prime, [xi_prime, cfg](double x, double y) {
        return dirac_sectorial_value(xi_prime, x + y, cfg);
    });
}

ComplexMatrix dirac_sectorial_contour_value(const Xi3& xi_prime, double r, const QuadratureConfig& cfg) {
    const double a = norm3(xi_prime);
    if (!(a > 0.0) || !(r > 0.0)) fail(ErrorKind::BadParameters, "needs xi' != 0 and r > 0");
    const double R = std::max(2.0 * a, 40.0 / r);
    const Contour c = build_contour(Sectorial{0.0, pi, 0.5 * a, R}, cfg);
    return integrate(c, [&](const ContourNode& node) { return dirac_sg_value(xi_prime, node.z, r, 0.0); }) *
           (I_unit / (2.0 * pi));
}

double dirac_probe_value(double a, double r, const QuadratureConfig& cfg) {
    if (!(a > 0.0) || !(r > 0.0)) fail(ErrorKind::BadParameters, "probe needs a > 0, r > 0");
    const double V = kernel_cutoff(a * r);
    const int panels = std::max(4, static_cast<int>(std::ceil(V)));
    return integrate_interval([&](double v) { return cplx(std::exp(-a * r * std::cosh(v))); }, 0.0, V, panels, cfg)
        .real();
}

DivergenceProbe divergence_probe(const Xi3& xi_prime, const std::vector<double>& r_list, const QuadratureConfig& cfg) {
    DivergenceProbe out;
    out.a = norm3(xi_prime);
    out.r_list = r_list;
    if (r_list.size() < 2) fail(ErrorKind::BadParameters, "probe needs at least two radii");
    for (std::size_t k = 1; k < r_list.size(); ++k)
        if (!(r_list[k] < r_list[k - 1])) fail(ErrorKind::BadParameters, "r_list must decrease");
    if (std::log10(r_list.front() / r_list.back()) < 3.0 - 1e-12)
        fail(ErrorKind::BadParameters, "r_list must span at least three decades");

    for (double r : r_list) {
        out.f_values.push_back(dirac_probe_value(out.a, r, cfg));
        out.e1_bounds.push_back(gsl_sf_expint_E1(out.a * r));
    }
    out.lower_bound_ok = true;
    for (std::size_t k = 0; k < r_list.size(); ++k)
        out.lower_bound_ok = out.lower_bound_ok && out.f_values[k] >= out.e1_bounds[k];

    out.increments_ok = true;
    const double ln10 = std::log(10.0);
    for (std::size_t k = 1; k < r_list.size(); ++k) {
        const double decades = std::log10(r_list[k - 1] / r_list[k]);
        const double inc = (out.f_values[k] - out.f_values[k - 1]) / decades;
        out.increments.push_back(inc);
        out.increments_ok = out.increments_ok && std::abs(inc - ln10) <= 0.05 * ln10;
    }

    const double n = static_cast<double>(r_list.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < r_list.size(); ++k) {
        const double X = std::log(1.0 / r_list[k]);
        sx += X, sy += out.f_values[k], sxx += X * X, sxy += X * out.f_values[k];
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.not_in_spp = out.lower_bound_ok && out.increments_ok;
    return out;
}

std::string DivergenceProbe::to_json() const {
    nlohmann::json j;
    j["a"] = a;
    j["r_list"] = r_list;
    j["f_values"] = f_values;
    j["e1_bounds"] = e1_bounds;
    j["increments"] = increments;
    j["slope"] = slope;
    j["lower_bound_ok"] = lower_bound_ok;
    j["increments_ok"] = increments_ok;
    j["not_in_spp"] = not_in_spp;
    return j.dump(2);
}

} // namespace sectorial
