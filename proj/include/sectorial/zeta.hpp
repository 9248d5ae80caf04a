#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sectorial/linalg.hpp"
#include "sectorial/quadrature.hpp"

namespace sectorial {

/// Eigenvalues alpha * (k + shift)^p for k >= k_first (each simple).
struct PowerLawSpectrum {
    double alpha = 1.0;
    double p = 1.0;
    double shift = 0.0;
    long k_first = 1;
};

struct ModelRealization {
    std::vector<cplx> spectrum;              // explicit eigenvalues, ascending by modulus
    std::optional<PowerLawSpectrum> law;     // infinite remainder of the spectrum
    std::optional<ComplexMatrix> matrix;     // matrix model instead of a spectrum
    int m = 2;                               // order
    int n = 1;                               // dimension
    int nu0 = 0;                             // zero-eigenvalue multiplicity
    std::optional<cplx> zeta_at_zero;        // analytic zeta(B, 0) of the nonzero spectrum
    double tail_tol = 1e-12;                 // for finite truncations without a law

    void validate() const;
};

/// Dirichlet Laplacian on [0, pi]: spectrum {k^2}, zeta(B, s) = zeta_R(2s).
ModelRealization interval_dirichlet_laplacian();
/// Spectrum {k}: zeta(B, s) = zeta_R(s).
ModelRealization linear_spectrum_model();
/// Appends `count` zero eigenvalues.
ModelRealization with_zero_modes(ModelRealization model, int count);
ModelRealization matrix_model(const ComplexMatrix& A, int m, int n);

cplx resolvent_trace(const ModelRealization& model, cplx lambda, int N);

struct TraceExpansionFit {
    int N = 0;
    double ray_angle = 0.0;
    std::vector<double> radii;
    std::vector<double> exponents;           // (n - l) / m - N, l = 0..n
    std::vector<cplx> coefficients;          // c_l
    double residual = 0.0;                   // relative weighted residual
    double condition = 0.0;
    bool log_term_suspected = false;
};

std::vector<double> log_spaced(double a, double b, int count);

TraceExpansionFit fit_trace_expansion(const ModelRealization& model, int N, double ray_angle,
                                      const std::vector<double>& radii);

std::string fit_report_json(const TraceExpansionFit& fit);

struct ZetaValueReport {
    cplx C0;
    bool applicable = true;
    std::optional<cplx> zeta_plus_nu0;
    std::optional<double> identity_residual;
};

ZetaValueReport basic_zeta_value(const ModelRealization& model, const TraceExpansionFit& fit);

cplx residue_log(const ModelRealization& model, const TraceExpansionFit& fit);

using InteriorTerm = std::function<cplx(const std::vector<double>& x, const std::vector<double>& xi)>;
using BoundaryTerm = std::function<cplx(const std::vector<double>& x_prime, const std::vector<double>& xi_prime)>;

struct ResidueIntegralConfig {
    int box_nodes = 4;          // Gauss-Legendre nodes per box axis
    int sphere_nodes = 10;      // per angular axis
    double rel_tol = 1e-10;
};

/// Interior: int_{[0,1]^n} int_{|xi|=1} l dS dx. Boundary: the same over
/// [0,1]^{n-1} and |xi'| = 1. Plain surface measure; S^0 counts its two points.
std::pair<cplx, cplx> residue_integrals(const InteriorTerm& interior, const BoundaryTerm& boundary, int n,
                                        const ResidueIntegralConfig& cfg = {});

} // namespace sectorial
