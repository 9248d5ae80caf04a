#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "sectorial/halfline.hpp"

namespace sectorial {

using Xi4 = std::array<double, 4>;
using Xi3 = std::array<double, 3>;

struct DiracCovariable {
    Xi4 xi{};

    Xi3 xi_prime() const { return {xi[0], xi[1], xi[2]}; }
    double norm() const;
    double tangential_norm() const;
    cplx sigma(cplx lambda) const;
};

/// (|xi'|^2 + lambda^2)^{1/2}, principal root. Rejects lambda within 1e-6
/// of the cuts +-i[|xi'|, inf).
cplx dirac_sigma(const Xi3& xi_prime, cplx lambda);

ComplexMatrix dirac_symbol(const Xi4& xi);

/// (p(xi) - lambda)^{-1} in closed form. Throws PoleHit near +-i|xi|.
ComplexMatrix dirac_resolvent_symbol(const Xi4& xi, cplx lambda);

/// Projection onto the +i|xi| eigenspace, closed form.
ComplexMatrix dirac_projection_closed(const Xi4& xi);

struct DiracProjection {
    ComplexMatrix closed;
    ComplexMatrix quadrature;   // (i/2pi) int q d lambda over Circle(i|xi|, |xi|/2)
    double difference = 0.0;
};

DiracProjection dirac_projection_symbol(const Xi4& xi, const QuadratureConfig& cfg = {16, 8, 1e-13});

/// Singular Green symbol-kernel as displayed (prefactor 1/(2 sigma)).
ComplexMatrix dirac_sg_value(const Xi3& xi_prime, cplx lambda, double x, double y);

/// Whole-line resolvent kernel of p(xi', D_n) - lambda at z = x - y.
ComplexMatrix dirac_free_value(const Xi3& xi_prime, cplx lambda, double z);

/// Full half-line resolvent kernel: free part minus the displayed term.
ComplexMatrix dirac_resolvent_kernel_value(const Xi3& xi_prime, cplx lambda, double x, double y);

/// Independent oracle: the half-line Green matrix from the first-order
/// system u' = -iE f + iE(p' - lambda)u with u1+u3 = u2+u4 = 0 at 0 and decay.
ComplexMatrix dirac_bvp_kernel(const Xi3& xi_prime, cplx lambda, double x, double y);

using MatrixPointKernel = std::function<ComplexMatrix(double x, double y)>;

/// 4x4-valued kernel sampled on a grid; block (i, j) at x_i, y_j.
struct MatrixSymbolKernel {
    HalfLineGrid grid;
    Xi3 xi_prime{};
    std::vector<ComplexMatrix> blocks;
    MatrixPointKernel evaluator;

    const ComplexMatrix& at(int i, int j) const { return blocks[static_cast<std::size_t>(i) * grid.n_points + j]; }
    SymbolKernel component(int a, int b) const;
};

MatrixSymbolKernel dirac_sg_kernel(const Xi3& xi_prime, cplx lambda, const HalfLineGrid& grid);

/// (i/2pi) int_R g(x, y, xi', t) dt at r = x + y, through t = |xi'| sinh v.
ComplexMatrix dirac_sectorial_value(const Xi3& xi_prime, double r, const QuadratureConfig& cfg = {16, 8, 1e-13});

MatrixSymbolKernel dirac_sectorial_kernel(const Xi3& xi_prime, const HalfLineGrid& grid,
                                          const QuadratureConfig& cfg = {16, 8, 1e-13});

/// Same integral over a sectorial contour (theta = 0, phi = pi) with r0 = |xi'|/2.
ComplexMatrix dirac_sectorial_contour_value(const Xi3& xi_prime, double r, const QuadratureConfig& cfg = {16, 10, 1e-13});

struct DivergenceProbe {
    double a = 0.0;
    std::vector<double> r_list;
    std::vector<double> f_values;
    std::vector<double> e1_bounds;
    std::vector<double> increments;   // growth of f per decade of 1/r
    double slope = 0.0;               // least-squares slope of f against ln(1/r)
    bool lower_bound_ok = false;
    bool increments_ok = false;       // within 5% of ln 10
    bool not_in_spp = false;

    std::string to_json() const;
};

/// f(r) = int_0^inf (a^2+t^2)^{-1/2} e^{-r (a^2+t^2)^{1/2}} dt, a = |xi'|.
double dirac_probe_value(double a, double r, const QuadratureConfig& cfg = {16, 8, 1e-13});

DivergenceProbe divergence_probe(const Xi3& xi_prime, const std::vector<double>& r_list,
                                 const QuadratureConfig& cfg = {16, 8, 1e-13});

} // namespace sectorial
