#include "sectorial/halfline.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "sectorial/error.hpp"

namespace sectorial {

namespace {

constexpr int graded_nodes_per_panel = 8;
constexpr double two_pi = 2.0 * pi;

} // namespace

double TangentialCovariable::norm() const {
    double s = 0.0;
    for (double v : xi_prime) s += v * v;
    return std::sqrt(s);
}

TangentialCovariable TangentialCovariable::scaled(double t) const {
    TangentialCovariable out = *this;
    for (double& v : out.xi_prime) v *= t;
    return out;
}

double model_scale(const TangentialCovariable& xi, SymbolModel model) {
    return model == SymbolModel::Bracket ? xi.bracket() : xi.norm();
}

// ---------------------------------------------------------------- grids

HalfLineGrid make_uniform_grid(double x_max, int n) {
    if (!(x_max > 0.0) || n < 16) fail(ErrorKind::BadParameters, "uniform grid needs x_max > 0, n >= 16");
    HalfLineGrid g{x_max, n, Spacing::Uniform, 0, {}, {}};
    const double h = x_max / n;
    for (int i = 0; i < n; ++i) {
        g.nodes.push_back((i + 0.5) * h);
        g.weights.push_back(h);
    }
    return g;
}

HalfLineGrid make_graded_grid(double x_max, int n, int extra_depth) {
    if (!(x_max > 0.0) || n < 16 || n % graded_nodes_per_panel != 0 || extra_depth < 0) {
        fail(ErrorKind::BadParameters, "graded grid needs x_max > 0, n >= 16, n a multiple of 8");
    }
    const int panels = n / graded_nodes_per_panel;
    const int depth = panels / 2 + extra_depth;
    const int uniform = panels - panels / 2;
    const double w = x_max / (uniform + 1);

    std::vector<double> breaks{0.0};
    for (int d = depth - 1; d >= 0; --d) breaks.push_back(w * std::ldexp(1.0, -d));
    for (int u = 1; u <= uniform; ++u) breaks.push_back(w * (u + 1));
    breaks.back() = x_max;

    const auto& rule = gauss_legendre(graded_nodes_per_panel);
    HalfLineGrid g{x_max, 0, Spacing::Graded, depth, {}, {}};
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double a = breaks[p], b = breaks[p + 1];
        for (int k = 0; k < graded_nodes_per_panel; ++k) {
            g.nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * rule.x[k]);
            g.weights.push_back(0.5 * (b - a) * rule.w[k]);
        }
    }
    g.n_points = static_cast<int>(g.nodes.size());
    return g;
}

SymbolKernel sample_kernel(const HalfLineGrid& grid, const TangentialCovariable& xi, int degree, PointKernel g) {
    const int n = grid.n_points;
    SymbolKernel K{grid, ComplexMatrix(n, n), xi, degree, std::move(g)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) K.values(i, j) = K.evaluator(grid.nodes[i], grid.nodes[j]);
    if (!K.values.allFinite()) fail(ErrorKind::BadParameters, "kernel has non-finite values on the grid");
    return K;
}

// ---------------------------------------------------------------- pointwise kernels

cplx kappa1(const TangentialCovariable& xi, cplx lambda, SymbolModel model) {
    const double b = model_scale(xi, model);
    const cplx k = std::sqrt(cplx(b * b) - lambda);
    if (!(k.real() > 0.0)) {
        std::ostringstream os;
        os << "lambda = " << lambda << " lies on [" << b * b << ", inf)";
        fail(ErrorKind::BranchViolation, os.str());
    }
    return k;
}

cplx resolvent_sg_value(const TangentialCovariable& xi, cplx lambda, double x, double y, SymbolModel model) {
    const cplx k = kappa1(xi, lambda, model);
    return -std::exp(-k * (x + y)) / (2.0 * k);
}

cplx resolvent_free_value(const TangentialCovariable& xi, cplx lambda, double x, double y, SymbolModel model) {
    const cplx k = kappa1(xi, lambda, model);
    return std::exp(-k * std::abs(x - y)) / (2.0 * k);
}

double glog_value(const TangentialCovariable& xi, double x, double y, SymbolModel model) {
    const double r = x + y;
    return std::exp(-model_scale(xi, model) * r) / r;
}

double gpm_log_value(const TangentialCovariable& xi, double x, double y, SymbolModel model) {
    return -glog_value(xi, x, y, model);
}

double glog_quad_value(const TangentialCovariable& xi, double x, double y, const QuadratureConfig& cfg,
                       SymbolModel model) {
    const double b = model_scale(xi, model);
    const double r = x + y;
    if (!(r > 0.0)) fail(ErrorKind::BadParameters, "glog needs x + y > 0");
    // integrand (1 / (2 sqrt(b^2 + s))) exp(-sqrt(b^2 + s) r) ds with s = u^2 - b^2, ds = 2u du
    auto integrand = [b, r](double u) {
        const double s = u * u - b * b;
        const double root = std::sqrt(b * b + s);
        return cplx(std::exp(-root * r) / (2.0 * root) * (2.0 * u));
    };
    constexpr double cutoff = 45.0;   // e^{-45} ~ 3e-20 relative to the value at u = b
    return integrate_interval(integrand, b, b + cutoff / r, 6, cfg).real();
}

SymbolKernel resolvent_sg_kernel(const TangentialCovariable& xi, cplx lambda, const HalfLineGrid& grid,
                                 SymbolModel model) {
    kappa1(xi, lambda, model);
    return sample_kernel(grid, xi, 0, [xi, lambda, model](double x, double y) {
        return resolvent_sg_value(xi, lambda, x, y, model);
    });
}

SymbolKernel glog_kernel_closed(const TangentialCovariable& xi, const HalfLineGrid& grid, SymbolModel model) {
    return sample_kernel(grid, xi, 0, [xi, model](double x, double y) { return cplx(glog_value(xi, x, y, model)); });
}

SymbolKernel glog_kernel_quad(const TangentialCovariable& xi, const HalfLineGrid& grid, const QuadratureConfig& cfg,
                              SymbolModel model) {
    return sample_kernel(grid, xi, 0, [xi, cfg, model](double x, double y) {
        return cplx(glog_quad_value(xi, x, y, cfg, model));
    });
}

SymbolKernel gpm_log_kernel(const TangentialCovariable& xi, const HalfLineGrid& grid, SymbolModel model) {
    return sample_kernel(grid, xi, 0, [xi, model](double x, double y) { return cplx(gpm_log_value(xi, x, y, model)); });
}

KernelFamily resolvent_sg_family(SymbolModel model) {
    return [model](double x, double y, const TangentialCovariable& xi, cplx lambda) {
        return resolvent_sg_value(xi, lambda, x, y, model);
    };
}

KernelFamily glog_family(SymbolModel model) {
    return [model](double x, double y, const TangentialCovariable& xi, cplx) { return cplx(glog_value(xi, x, y, model)); };
}

KernelFamily gpm_log_family(SymbolModel model) {
    return [model](double x, double y, const TangentialCovariable& xi, cplx) {
        return cplx(gpm_log_value(xi, x, y, model));
    };
}

// ---------------------------------------------------------------- checks

double even_order_split_check(const TangentialCovariable& xi, const SymbolKernel& kernel, int k) {
    const double a = xi.norm();
    if (a < 1.0) fail(ErrorKind::BadParameters, "even_order_split_check needs |xi'| >= 1");
    const auto& nodes = kernel.grid.nodes;
    double sup = 0.0;
    for (int i = 0; i < kernel.grid.n_points; ++i) {
        for (int j = 0; j < kernel.grid.n_points; ++j) {
            const double r = nodes[i] + nodes[j];
            if (r > 0.1) continue;
            sup = std::max(sup, std::abs(kernel.values(i, j) + k * std::exp(-a * r) / r));
        }
    }
    return sup;
}

std::vector<HomogeneitySample> default_homogeneity_samples() {
    std::vector<HomogeneitySample> out;
    const std::vector<std::vector<double>> xis{{1.0}, {1.5, -0.5}, {0.8, 0.9, 1.2}};
    const std::vector<cplx> lambdas{-1.0, cplx(0.5, 2.0), cplx(-3.0, -1.0)};
    for (std::size_t a = 0; a < xis.size(); ++a)
        for (double x : {0.05, 0.4, 1.3})
            for (double y : {0.1, 0.7})
                out.push_back({x, y, TangentialCovariable{xis[a]}, lambdas[a]});
    return out;
}

double quasihomogeneity_check(const KernelFamily& term, int order_m, int degree_j, const std::vector<double>& t_list,
                              const std::vector<HomogeneitySample>& samples) {
    double worst = 0.0;
    for (double t : t_list) {
        if (!(t > 0.0)) fail(ErrorKind::BadParameters, "scaling factors must be positive");
        for (const auto& s : samples) {
            const double a = s.xi.norm();
            if (a < 1.0 || t * a < 1.0) fail(ErrorKind::BadParameters, "homogeneity is tested only for |xi'| >= 1");
            const cplx scaled = term(s.x / t, s.y / t, s.xi.scaled(t), std::pow(t, order_m) * s.lambda);
            const cplx base = term(s.x, s.y, s.xi, s.lambda);
            worst = std::max(worst, std::abs(scaled - std::pow(t, 1 - order_m - degree_j) * base));
        }
    }
    return worst;
}

namespace {

// 4th-order central differences, nested; h = 1e-3 * scale
double step_for(double v) { return 1e-3 * std::max(std::abs(v), 1e-3); }

cplx differentiate(const KernelFamily& g, double x, double y, double a, cplx lambda, int da, int dx, int dy) {
    auto stencil = [](auto&& f, double v, double h) {
        return (-f(v + 2 * h) + 8.0 * f(v + h) - 8.0 * f(v - h) + f(v - 2 * h)) / (12.0 * h);
    };
    if (da > 0) {
        return stencil([&](double v) { return differentiate(g, x, y, v, lambda, da - 1, dx, dy); }, a, step_for(a));
    }
    if (dx > 0) {
        return stencil([&](double v) { return differentiate(g, v, y, a, lambda, 0, dx - 1, dy); }, x, step_for(x));
    }
    if (dy > 0) {
        return stencil([&](double v) { return differentiate(g, x, v, a, lambda, 0, 0, dy - 1); }, y, step_for(y));
    }
    return g(x, y, TangentialCovariable{{a}}, lambda);
}

} // namespace

DecayFit decay_estimate_check(const KernelFamily& term, DecayIndices idx, int degree_j, const DecayCheckOptions& opts) {
    const int e_th = -idx.alpha - idx.k + idx.k_prime - idx.l + idx.l_prime - degree_j;
    if (e_th > 0 && !opts.allow_violation) {
        std::ostringstream os;
        os << "-k+k'-l+l'-|alpha|-j = " << e_th << " > 0";
        fail(ErrorKind::IndexViolation, os.str());
    }
    if (opts.xi_samples < 2 || opts.X_samples < 2 || !(opts.xi_min >= 1.0) || !(opts.X_min > 0.0)) {
        fail(ErrorKind::BadParameters, "decay sweep needs >= 2 samples per axis, xi_min >= 1, X_min > 0");
    }

    struct Row { double log_a, X, value; };
    std::vector<Row> rows;
    for (int ia = 0; ia < opts.xi_samples; ++ia) {
        const double a = opts.xi_min * std::pow(opts.xi_max / opts.xi_min, double(ia) / (opts.xi_samples - 1));
        for (int iX = 0; iX < opts.X_samples; ++iX) {
            const double X = opts.X_min * std::pow(opts.X_max / opts.X_min, double(iX) / (opts.X_samples - 1));
            const double r = X / a;
            for (double frac : {0.5, 0.25}) {
                const double x = frac * r, y = (1.0 - frac) * r;
                const cplx d = differentiate(term, x, y, a, opts.lambda, idx.alpha, idx.k_prime, idx.l_prime);
                const double v = std::abs(d) * std::pow(x, idx.k) * std::pow(y, idx.l) * r;
                if (v > 0.0) rows.push_back({std::log(a), X, std::log(v)});
            }
        }
    }
    if (rows.size() < 4) fail(ErrorKind::BadParameters, "decay sweep produced no nonzero samples");

    // log(|D g| r) = b0 + e log|xi'| - c X
    Eigen::MatrixXd M(rows.size(), 3);
    Eigen::VectorXd rhs(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        M(i, 0) = 1.0;
        M(i, 1) = rows[i].log_a;
        M(i, 2) = -rows[i].X;
        rhs(i) = rows[i].value;
    }
    const Eigen::VectorXd beta = M.colPivHouseholderQr().solve(rhs);
    DecayFit fit;
    fit.exponent_fit = beta(1);
    fit.c = beta(2);
    fit.exponent_theory = e_th;
    fit.fit_residual = std::sqrt((M * beta - rhs).squaredNorm() / rows.size());
    double logC = -1e300;
    for (const auto& row : rows) logC = std::max(logC, row.value - e_th * row.log_a + fit.c * row.X);
    fit.constant = std::exp(logC);
    return fit;
}

double kernel_l2_opnorm(const SymbolKernel& kernel) {
    const auto& w = kernel.grid.weights;
    const int n = kernel.grid.n_points;
    ComplexMatrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = std::sqrt(w[i]) * kernel.values(i, j) * std::sqrt(w[j]);
    return opnorm2(M);
}

cplx tr_n(const SymbolKernel& kernel) {
    if (!kernel.evaluator) fail(ErrorKind::BadParameters, "tr_n needs a kernel evaluator for refinement");
    auto diag_sum = [&](const HalfLineGrid& g) {
        cplx s{0.0, 0.0};
        for (int i = 0; i < g.n_points; ++i) s += g.weights[i] * kernel.evaluator(g.nodes[i], g.nodes[i]);
        return s;
    };
    const int n = std::max(16, kernel.grid.n_points - kernel.grid.n_points % graded_nodes_per_panel);
    constexpr int depth_step = 6;
    constexpr int max_levels = 6;
    cplx prev = diag_sum(kernel.grid);
    double prev_inc = -1.0;
    int stalled = 0;
    for (int level = 1; level <= max_levels; ++level) {
        // deeper grading near 0 and twice the points in the bulk (oscillating kernels)
        const int n_level = std::min(n << level, 8192);
        const cplx cur = diag_sum(make_graded_grid(kernel.grid.x_max, n_level, depth_step * level));
        if (!std::isfinite(std::abs(cur))) fail(ErrorKind::DiagonalDivergence, "diagonal integral is not finite");
        const double inc = std::abs(cur - prev);
        if (inc <= 1e-13 * std::abs(cur) || inc == 0.0) return cur;
        if (prev_inc >= 0.0 && inc > 0.5 * prev_inc) {
            if (++stalled >= 2) {
                std::ostringstream os;
                os << "diagonal integral keeps growing under grading: increment " << inc << " at value " << cur;
                fail(ErrorKind::DiagonalDivergence, os.str());
            }
        } else {
            stalled = 0;
        }
        prev = cur;
        prev_inc = inc;
    }
    fail(ErrorKind::NoConvergence, "diagonal integral did not settle under grading");
}

// ---------------------------------------------------------------- log transform

cplx log_transform_symbol(const ScalarSymbol& s, BranchAngle cut, const LogTransformConfig& cfg) {
    const cplx dir = std::polar(1.0, cut.theta);
    const double rho1 = 1e5, rho2 = 1e7;
    const double m1 = std::abs(s(rho1 * dir)), m2 = std::abs(s(rho2 * dir));
    if (m1 == 0.0 && m2 == 0.0) return 0.0;
    const double slope = std::log(m2 / m1) / std::log(rho2 / rho1);
    if (!std::isfinite(slope) || slope > -0.95) {
        std::ostringstream os;
        os << "sampled decay exponent " << slope << " is slower than 1/lambda";
        fail(ErrorKind::TooSlowDecay, os.str());
    }

    cplx c{0.0, 0.0};
    if (cfg.leading_coefficient) {
        c = *cfg.leading_coefficient;
    } else if (slope > -1.5) {
        // lambda s(lambda) -> c, with one Richardson step on the 1/lambda correction
        const double rho = 1e12;
        const cplx c1 = rho * dir * s(rho * dir);
        const cplx c2 = 2.0 * rho * dir * s(2.0 * rho * dir);
        c = 2.0 * c2 - c1;
    }
    auto remainder = [&](cplx z) { return s(z) - c / z; };

    const double tail_coeff = std::abs(rho1 * rho1 * remainder(rho1 * dir));
    double R = 1e4;
    while (tail_coeff * (1.0 + std::log(R)) / R > cfg.tail_tol && R < 1e18) R *= 10.0;

    const MatrixIntegrand f = [&](const ContourNode& node) {
        ComplexMatrix m(1, 1);
        m(0, 0) = remainder(node.z) * node.log_z;
        return m;
    };
    const auto loop = build_contour(LaurentLoop{cut.theta, cfg.r0, R}, cfg.quadrature);
    // the tail piece is O(1/R) and suffers cancellation in s - c/lambda; a loose tolerance suffices
    QuadratureConfig tail_quad = cfg.quadrature;
    tail_quad.rel_tol = std::max(tail_quad.rel_tol, 1e-3);
    const auto tail = contour_from_legs({RadialLeg{cut.theta, 2.0 * R, R}, RadialLeg{cut.theta - two_pi, R, 2.0 * R}},
                                        tail_quad);
    const cplx total = integrate(loop, f)(0, 0) + integrate(tail, f)(0, 0);
    return (I_unit / two_pi) * total;
}

BoundarySymbolModel flat_laplacian_model() {
    return {[](int, const TangentialCovariable&, cplx) { return cplx(0.0, 0.0); }};
}

std::vector<cplx> slog_sub(const BoundarySymbolModel& model, const TangentialCovariable& xi, BranchAngle cut, int J,
                           const LogTransformConfig& cfg) {
    if (J < 1) fail(ErrorKind::BadParameters, "slog_sub needs J >= 1");
    std::vector<cplx> out;
    for (int j = 1; j < J; ++j) {
        out.push_back(log_transform_symbol([&](cplx lambda) { return model.term(j, xi, lambda); }, cut, cfg));
    }
    return out;
}

double transmission_parity_check(const FullSymbol& term, int dim_n, int degree, const std::vector<double>& xi_n_samples) {
    if (dim_n < 1) fail(ErrorKind::BadParameters, "dimension must be positive");
    const double sign = (degree % 2 == 0) ? 1.0 : -1.0;
    double worst = 0.0;
    for (double t : xi_n_samples) {
        if (std::abs(t) < 1.0) fail(ErrorKind::BadParameters, "parity is tested for |xi_n| >= 1");
        std::vector<double> plus(dim_n, 0.0), minus(dim_n, 0.0);
        plus.back() = t;
        minus.back() = -t;
        worst = std::max(worst, (term(minus) - sign * term(plus)).cwiseAbs().maxCoeff());
    }
    return worst;
}

void write_kernel_csv(const SymbolKernel& kernel, std::ostream& os) {
    os << "x_n,y_n,re,im\n";
    os.precision(17);
    for (int i = 0; i < kernel.grid.n_points; ++i)
        for (int j = 0; j < kernel.grid.n_points; ++j)
            os << kernel.grid.nodes[i] << ',' << kernel.grid.nodes[j] << ',' << kernel.values(i, j).real() << ','
               << kernel.values(i, j).imag() << '\n';
}

} // namespace sectorial
