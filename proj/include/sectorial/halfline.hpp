#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sectorial/contour.hpp"

namespace sectorial {

/// Tangential covariable xi' of length n-1.
struct TangentialCovariable {
    std::vector<double> xi_prime;

    double norm() const;
    double bracket() const { return std::sqrt(norm() * norm() + 1.0); }
    TangentialCovariable scaled(double t) const;
};

/// Bracket: P = 1 - Delta (uses <xi'>); Homogeneous: P = -Delta (uses |xi'|).
enum class SymbolModel { Bracket, Homogeneous };

double model_scale(const TangentialCovariable& xi, SymbolModel model);

enum class Spacing { Uniform, Graded };

struct HalfLineGrid {
    double x_max = 1.0;
    int n_points = 0;
    Spacing spacing = Spacing::Uniform;
    int grading_depth = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Midpoint rule with n equal cells on (0, x_max].
HalfLineGrid make_uniform_grid(double x_max, int n);

/// Gauss-Legendre panels (8 nodes each): half the panels subdivide the first
/// cell geometrically toward 0, the rest are uniform. `extra_depth` adds
/// geometric panels (and nodes) without touching the rest.
HalfLineGrid make_graded_grid(double x_max, int n, int extra_depth = 0);

using PointKernel = std::function<cplx(double x, double y)>;
using KernelFamily = std::function<cplx(double x, double y, const TangentialCovariable& xi, cplx lambda)>;

struct SymbolKernel {
    HalfLineGrid grid;
    ComplexMatrix values;    // values(i, j) = g(x_i, y_j)
    TangentialCovariable xi;
    int degree = 0;          // index j of the term (homogeneity tag)
    PointKernel evaluator;   // used when the grid is refined
};

SymbolKernel sample_kernel(const HalfLineGrid& grid, const TangentialCovariable& xi, int degree, PointKernel g);

/// kappa = (s^2 - lambda)^{1/2}, principal root, Re kappa > 0 enforced.
cplx kappa1(const TangentialCovariable& xi, cplx lambda, SymbolModel model = SymbolModel::Bracket);

cplx resolvent_sg_value(const TangentialCovariable& xi, cplx lambda, double x, double y,
                        SymbolModel model = SymbolModel::Bracket);
cplx resolvent_free_value(const TangentialCovariable& xi, cplx lambda, double x, double y,
                          SymbolModel model = SymbolModel::Bracket);
double glog_value(const TangentialCovariable& xi, double x, double y, SymbolModel model = SymbolModel::Bracket);
double gpm_log_value(const TangentialCovariable& xi, double x, double y, SymbolModel model = SymbolModel::Bracket);

/// The log kernel by quadrature of its defining s-integral at one point.
double glog_quad_value(const TangentialCovariable& xi, double x, double y, const QuadratureConfig& cfg,
                       SymbolModel model = SymbolModel::Bracket);

SymbolKernel resolvent_sg_kernel(const TangentialCovariable& xi, cplx lambda, const HalfLineGrid& grid,
                                 SymbolModel model = SymbolModel::Bracket);
SymbolKernel glog_kernel_closed(const TangentialCovariable& xi, const HalfLineGrid& grid,
                                SymbolModel model = SymbolModel::Bracket);
SymbolKernel glog_kernel_quad(const TangentialCovariable& xi, const HalfLineGrid& grid,
                              const QuadratureConfig& cfg = {16, 6, 1e-13}, SymbolModel model = SymbolModel::Bracket);
SymbolKernel gpm_log_kernel(const TangentialCovariable& xi, const HalfLineGrid& grid,
                            SymbolModel model = SymbolModel::Bracket);

KernelFamily resolvent_sg_family(SymbolModel model);
KernelFamily glog_family(SymbolModel model);
KernelFamily gpm_log_family(SymbolModel model);

/// sup over grid points with x + y <= 0.1 of |g + k e^{-|xi'| r} / r|.
double even_order_split_check(const TangentialCovariable& xi, const SymbolKernel& kernel, int k);

struct HomogeneitySample {
    double x;
    double y;
    TangentialCovariable xi;
    cplx lambda;
};

std::vector<HomogeneitySample> default_homogeneity_samples();

/// max |g(x/t, y/t, t xi', t^m lambda) - t^{1-m-j} g(x, y, xi', lambda)|.
double quasihomogeneity_check(const KernelFamily& term, int order_m, int degree_j, const std::vector<double>& t_list,
                              const std::vector<HomogeneitySample>& samples = default_homogeneity_samples());

struct DecayIndices {
    int alpha = 0;     // order of d/d xi_1
    int k = 0;         // power of x
    int k_prime = 0;   // order of d/dx
    int l = 0;         // power of y
    int l_prime = 0;   // order of d/dy
};

struct DecayCheckOptions {
    double xi_min = 1.0;
    double xi_max = 32.0;
    int xi_samples = 11;
    double X_min = 0.02;   // X = |xi'| (x + y)
    double X_max = 8.0;
    int X_samples = 15;
    cplx lambda = 0.0;
    bool allow_violation = false;
};

struct DecayFit {
    double c = 0.0;               // fitted exponential rate
    double constant = 0.0;        // envelope constant with the theoretical exponent
    double exponent_fit = 0.0;    // fitted power of |xi'|
    int exponent_theory = 0;
    double fit_residual = 0.0;    // rms of the log-linear fit
};

DecayFit decay_estimate_check(const KernelFamily& term, DecayIndices idx, int degree_j,
                              const DecayCheckOptions& opts = {});

/// Discrete L2(0, x_max) operator norm of the kernel with quadrature weights.
double kernel_l2_opnorm(const SymbolKernel& kernel);

/// Integral of the diagonal g(x, x) over (0, x_max].
cplx tr_n(const SymbolKernel& kernel);

using ScalarSymbol = std::function<cplx(cplx lambda)>;

struct LogTransformConfig {
    QuadratureConfig quadrature{16, 8, 1e-13};
    double r0 = 0.25;
    double tail_tol = 1e-12;
    std::optional<cplx> leading_coefficient;   // c in s ~ c / lambda, if known
};

/// (i / 2 pi) int_{C_theta} log lambda s(lambda) d lambda, with a pure
/// c / lambda component removed first when s decays only like 1 / lambda.
cplx log_transform_symbol(const ScalarSymbol& s, BranchAngle cut, const LogTransformConfig& cfg = {});

struct BoundarySymbolModel {
    std::function<cplx(int j, const TangentialCovariable& xi, cplx lambda)> term;
};

BoundarySymbolModel flat_laplacian_model();

std::vector<cplx> slog_sub(const BoundarySymbolModel& model, const TangentialCovariable& xi, BranchAngle cut, int J,
                           const LogTransformConfig& cfg = {});

using FullSymbol = std::function<ComplexMatrix(const std::vector<double>& xi)>;

/// max over xi_n in samples of |term(0, -xi_n) - (-1)^d term(0, xi_n)| (entrywise).
double transmission_parity_check(const FullSymbol& term, int dim_n, int degree,
                                 const std::vector<double>& xi_n_samples = {1.0, 2.0, 5.0, 17.0});

void write_kernel_csv(const SymbolKernel& kernel, std::ostream& os);

} // namespace sectorial
