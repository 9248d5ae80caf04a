#include "sectorial/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sectorial/error.hpp"

namespace sectorial {

void ModelRealization::validate() const {
    if (m < 1 || n < 0 || nu0 < 0) fail(ErrorKind::BadParameters, "model needs m >= 1, n >= 0, nu0 >= 0");
    if (!matrix) {
        int zeros = 0;
        for (auto z : spectrum) zeros += (z == cplx(0.0, 0.0));
        if (zeros != nu0) fail(ErrorKind::BadParameters, "nu0 differs from the zero count of the spectrum");
        for (std::size_t i = 1; i < spectrum.size(); ++i)
            if (std::abs(spectrum[i]) < std::abs(spectrum[i - 1]))
                fail(ErrorKind::BadParameters, "spectrum must be sorted ascending");
    }
}

ModelRealization interval_dirichlet_laplacian() {
    ModelRealization m;
    m.law = PowerLawSpectrum{1.0, 2.0, 0.0, 1};
    m.m = 2;
    m.n = 1;
    m.zeta_at_zero = -0.5;
    return m;
}

ModelRealization linear_spectrum_model() {
    ModelRealization m;
    m.law = PowerLawSpectrum{1.0, 1.0, 0.0, 1};
    m.m = 1;
    m.n = 1;
    m.zeta_at_zero = -0.5;
    return m;
}

ModelRealization with_zero_modes(ModelRealization model, int count) {
    model.spectrum.insert(model.spectrum.begin(), count, cplx(0.0, 0.0));
    model.nu0 += count;
    return model;
}

ModelRealization matrix_model(const ComplexMatrix& A, int m, int n) {
    require_square_finite(A, "matrix_model");
    ModelRealization model;
    model.matrix = A;
    model.m = m;
    model.n = n;
    for (auto z : eigenvalues(A)) model.nu0 += std::abs(z) < 1e-12 * std::max(1.0, opnorm2(A));
    return model;
}

namespace {

cplx law_term(const PowerLawSpectrum& law, double t, cplx lambda, int N) {
    return std::pow(law.alpha * std::pow(t + law.shift, law.p) - lambda, -N);
}

cplx law_sum(const PowerLawSpectrum& law, cplx lambda, int N) {
    // location of the nearest singularity of t -> term, to keep the tail start clear of it
    const cplx t_star = std::pow(lambda / law.alpha, 1.0 / law.p) - law.shift;
    long K = std::max<long>(law.k_first + 1, 2000);
    if (t_star.real() > 0.0 && std::abs(t_star.imag()) < t_star.real()) {
        K = std::max<long>(K, static_cast<long>(4.0 * t_star.real()) + 1);
    }
    cplx direct{0.0, 0.0};
    for (long k = K - 1; k >= law.k_first; --k) direct += law_term(law, double(k), lambda, N);

    // sum_{k >= K} f(k) = int_{K-1/2}^inf f + f'(K-1/2)/24 - 7 f'''(K-1/2)/5760 + ...
    const double a = K - 0.5;
    auto f = [&](double t) { return law_term(law, t, lambda, N); };
    const auto& rule = gauss_legendre(16);
    cplx integral{0.0, 0.0};
    // t = a / u on dyadic panels of u in (0, 1]
    auto g = [&](double u) { return f(a / u) * (a / (u * u)); };
    double hi = 1.0;
    for (int p = 0; p < 60; ++p) {
        const double lo = 0.5 * hi;
        integral += composite_gl(g, lo, hi, 1, rule);
        hi = lo;
    }
    const double h = 0.05 * a;
    const cplx d1 = (-f(a + 2 * h) + 8.0 * f(a + h) - 8.0 * f(a - h) + f(a - 2 * h)) / (12.0 * h);
    const cplx d3 = (f(a + 2 * h) - 2.0 * f(a + h) + 2.0 * f(a - h) - f(a - 2 * h)) / (2.0 * h * h * h);
    return direct + integral + d1 / 24.0 - 7.0 * d3 / 5760.0;
}

} // namespace

cplx resolvent_trace(const ModelRealization& model, cplx lambda, int N) {
    model.validate();
    if (N < 1 || N * model.m <= model.n) {
        fail(ErrorKind::BadParameters, "trace class needs N m > n");
    }
    if (model.matrix) {
        const auto& A = *model.matrix;
        const auto n = A.rows();
        ComplexMatrix X;
        try {
            X = lu_solve(A - lambda * ComplexMatrix::Identity(n, n), ComplexMatrix::Identity(n, n));
        } catch (const NumericError& e) {
            if (e.kind() == ErrorKind::SingularMatrix) fail(ErrorKind::SpectrumHit, "lambda is an eigenvalue");
            throw;
        }
        ComplexMatrix P = X;
        for (int k = 1; k < N; ++k) P = P * X;
        return P.trace();
    }
    cplx sum{0.0, 0.0};
    for (auto mu : model.spectrum) {
        if (std::abs(mu - lambda) <= 1e-14 * std::max(1.0, std::abs(mu))) {
            fail(ErrorKind::SpectrumHit, "lambda is an eigenvalue");
        }
        sum += std::pow(mu - lambda, -N);
    }
    if (model.law) {
        const auto& law = *model.law;
        for (long k = law.k_first; k < law.k_first + 4; ++k) {
            const cplx mu = law.alpha * std::pow(k + law.shift, law.p);
            if (std::abs(mu - lambda) <= 1e-14 * std::max(1.0, std::abs(mu))) {
                fail(ErrorKind::SpectrumHit, "lambda is an eigenvalue");
            }
        }
        sum += law_sum(law, lambda, N);
    } else if (!model.spectrum.empty()) {
        // a finite list stands for a truncated spectrum: the omitted part is bounded by the last term
        const double last = std::abs(std::pow(model.spectrum.back() - lambda, -N));
        if (last > model.tail_tol * std::max(1.0, std::abs(sum)) && model.spectrum.size() > 1) {
            std::ostringstream os;
            os << "truncated spectrum without tail law; last term " << last << " exceeds tolerance";
            fail(ErrorKind::TailUnknown, os.str());
        }
    }
    return sum;
}

std::vector<double> log_spaced(double a, double b, int count) {
    if (!(a > 0.0) || !(b > a) || count < 2) fail(ErrorKind::BadParameters, "log_spaced needs 0 < a < b, count >= 2");
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = a * std::pow(b / a, double(i) / (count - 1));
    return out;
}

TraceExpansionFit fit_trace_expansion(const ModelRealization& model, int N, double ray_angle,
                                      const std::vector<double>& radii) {
    model.validate();
    if (radii.size() < static_cast<std::size_t>(model.n + 2)) {
        fail(ErrorKind::BadParameters, "need more sample radii than coefficients");
    }
    TraceExpansionFit fit;
    fit.N = N;
    fit.ray_angle = ray_angle;
    fit.radii = radii;
    for (int l = 0; l <= model.n; ++l) fit.exponents.push_back(double(model.n - l) / model.m - N);
    for (std::size_t i = 0; i < fit.exponents.size(); ++i)
        for (std::size_t j = i + 1; j < fit.exponents.size(); ++j)
            if (std::abs(fit.exponents[i] - fit.exponents[j]) < 1e-12)
                fail(ErrorKind::IllConditionedFit, "duplicate exponents in the expansion basis");

    const auto rows = static_cast<Eigen::Index>(radii.size());
    const auto cols = static_cast<Eigen::Index>(fit.exponents.size());
    ComplexMatrix M(rows, cols);
    ComplexVector rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const cplx lambda = std::polar(radii[i], ray_angle);
        const double w = std::pow(std::abs(lambda), N);
        for (Eigen::Index l = 0; l < cols; ++l) M(i, l) = w * std::pow(-lambda, fit.exponents[l]);
        rhs(i) = w * resolvent_trace(model, lambda, N);
    }
    // column scaling only for the conditioning diagnostic
    Eigen::VectorXd colnorm = M.colwise().norm();
    ComplexMatrix Ms = M * colnorm.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<ComplexMatrix> svd(Ms);
    const auto& sv = svd.singularValues();
    fit.condition = sv(0) / sv(sv.size() - 1);
    if (!(fit.condition < 1e12)) {
        std::ostringstream os;
        os << "basis condition number " << fit.condition;
        fail(ErrorKind::IllConditionedFit, os.str());
    }
    const ComplexVector c = M.colPivHouseholderQr().solve(rhs);
    fit.coefficients.assign(c.data(), c.data() + c.size());
    const ComplexVector res = M * c - rhs;
    fit.residual = res.norm() / rhs.norm();

    // residual correlated with log|lambda| hints at a missing log term
    double mean_log = 0.0, mean_r = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        mean_log += std::log(radii[i]) / rows;
        mean_r += std::abs(res(i)) / rows;
    }
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double dx = std::log(radii[i]) - mean_log, dy = std::abs(res(i)) - mean_r;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    const double corr = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
    fit.log_term_suspected = fit.residual > 1e-6 && std::abs(corr) > 0.9;
    return fit;
}

std::string fit_report_json(const TraceExpansionFit& fit) {
    nlohmann::json j;
    j["N"] = fit.N;
    j["exponents"] = fit.exponents;
    nlohmann::json coeffs = nlohmann::json::array();
    for (auto c : fit.coefficients) coeffs.push_back({c.real(), c.imag()});
    j["coefficients"] = coeffs;
    j["residual"] = fit.residual;
    return j.dump();
}

ZetaValueReport basic_zeta_value(const ModelRealization& model, const TraceExpansionFit& fit) {
    if (fit.coefficients.size() != static_cast<std::size_t>(model.n + 1)) {
        fail(ErrorKind::BadParameters, "fit does not belong to this model");
    }
    ZetaValueReport rep;
    rep.C0 = fit.coefficients[model.n];
    rep.applicable = !model.matrix.has_value();
    if (rep.applicable && model.zeta_at_zero) {
        rep.zeta_plus_nu0 = *model.zeta_at_zero + double(model.nu0);
        rep.identity_residual = std::abs(rep.C0 - *rep.zeta_plus_nu0);
    }
    return rep;
}

cplx residue_log(const ModelRealization& model, const TraceExpansionFit& fit) {
    return -double(model.m) * basic_zeta_value(model, fit).C0;
}

namespace {

struct WeightedPoint {
    std::vector<double> p;
    double w;
};

// Unit sphere S^{d-1} in R^d, hyperspherical coordinates.
std::vector<WeightedPoint> sphere_rule(int d, int nodes) {
    if (d < 1) return {};
    if (d == 1) return {{{1.0}, 1.0}, {{-1.0}, 1.0}};
    const auto& gl = gauss_legendre(nodes);
    std::vector<WeightedPoint> out;
    const int polar = d - 2;
    const int az = 2 * nodes;
    std::vector<int> idx(polar, 0);
    while (true) {
        for (int a = 0; a < az; ++a) {
            const double phi = 2.0 * pi * a / az;
            std::vector<double> angles(polar);
            double w = 2.0 * pi / az;
            for (int k = 0; k < polar; ++k) {
                angles[k] = 0.5 * pi * (gl.x[idx[k]] + 1.0);
                w *= 0.5 * pi * gl.w[idx[k]] * std::pow(std::sin(angles[k]), polar - k);
            }
            std::vector<double> p(d);
            double s = 1.0;
            for (int k = 0; k < polar; ++k) {
                p[k] = s * std::cos(angles[k]);
                s *= std::sin(angles[k]);
            }
            p[d - 2] = s * std::cos(phi);
            p[d - 1] = s * std::sin(phi);
            out.push_back({std::move(p), w});
        }
        int k = 0;
        while (k < polar && ++idx[k] == nodes) idx[k++] = 0;
        if (k == polar) break;
    }
    return out;
}

std::vector<WeightedPoint> box_rule(int d, int nodes) {
    const auto& gl = gauss_legendre(nodes);
    std::vector<WeightedPoint> out;
    std::vector<int> idx(d, 0);
    while (true) {
        std::vector<double> p(d);
        double w = 1.0;
        for (int k = 0; k < d; ++k) {
            p[k] = 0.5 * (gl.x[idx[k]] + 1.0);
            w *= 0.5 * gl.w[idx[k]];
        }
        out.push_back({std::move(p), w});
        int k = 0;
        while (k < d && ++idx[k] == nodes) idx[k++] = 0;
        if (k == d) break;
    }
    return out;
}

template <class F>
cplx product_integral(const F& f, int dim, int box_nodes, int sphere_nodes) {
    cplx sum{0.0, 0.0};
    const auto box = box_rule(dim, box_nodes);
    const auto sph = sphere_rule(dim, sphere_nodes);
    for (const auto& b : box)
        for (const auto& s : sph) sum += b.w * s.w * f(b.p, s.p);
    return sum;
}

} // namespace

std::pair<cplx, cplx> residue_integrals(const InteriorTerm& interior, const BoundaryTerm& boundary, int n,
                                        const ResidueIntegralConfig& cfg) {
    if (n < 2) fail(ErrorKind::BadParameters, "residue integrals need n >= 2");
    auto converged = [&](auto&& f, int dim) {
        const cplx a = product_integral(f, dim, cfg.box_nodes, cfg.sphere_nodes);
        const cplx b = product_integral(f, dim, 2 * cfg.box_nodes, 2 * cfg.sphere_nodes);
        if (std::abs(a - b) > cfg.rel_tol * std::max(1.0, std::abs(b))) {
            std::ostringstream os;
            os << "residue integral changed by " << std::abs(a - b) << " under refinement";
            fail(ErrorKind::NoConvergence, os.str());
        }
        return b;
    };
    return {converged(interior, n), converged(boundary, n - 1)};
}

} // namespace sectorial
