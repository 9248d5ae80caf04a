#include "sectorial/blockdirichlet.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "sectorial/error.hpp"

namespace sectorial {

namespace {

ComplexMatrix kron(const ComplexMatrix& X, const ComplexMatrix& Y) {
    ComplexMatrix K(X.rows() * Y.rows(), X.cols() * Y.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X.cols(); ++j) K.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
    return K;
}

ComplexMatrix blocks(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c, const ComplexMatrix& d) {
    const auto n = a.rows();
    ComplexMatrix M(2 * n, 2 * n);
    M << a, b, c, d;
    return M;
}

void require_hermitian_positive(const ComplexMatrix& X, const char* who) {
    require_square_finite(X, who);
    if ((X - X.adjoint()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, X.cwiseAbs().maxCoeff()))
        fail(ErrorKind::BadParameters, std::string(who) + ": not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(X, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 0.0)) fail(ErrorKind::BadParameters, std::string(who) + ": not positive");
}

} // namespace

ProductModel product_model_from(const ComplexMatrix& S, const ComplexMatrix& T1d) {
    require_hermitian_positive(S, "product model S");
    require_hermitian_positive(T1d, "product model T1d");
    ProductModel m;
    m.S = S;
    m.T1d = T1d;
    const auto ns = S.rows(), nt = T1d.rows();
    m.S_full = kron(ComplexMatrix::Identity(nt, nt), S);
    m.B = kron(T1d, ComplexMatrix::Identity(ns, ns)) + m.S_full;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.B * m.B + m.S_full * m.S_full);
    if (es.info() != Eigen::Success) fail(ErrorKind::NoConvergence, "B^2 + S^2 eigendecomposition");
    m.b1_eigenvalues = es.eigenvalues().cwiseSqrt();
    m.b1_eigenvectors = es.eigenvectors();
    const ComplexMatrix& V = m.b1_eigenvectors;
    m.B1 = V * m.b1_eigenvalues.cast<cplx>().asDiagonal() * V.adjoint();
    m.B1_inv = V * m.b1_eigenvalues.cwiseInverse().cast<cplx>().asDiagonal() * V.adjoint();
    m.A = blocks(m.B, m.S_full, m.S_full, -m.B);
    return m;
}

ProductModel build_product_model(int n_s, int n_t, double a) {
    if (n_s < 1 || n_t < 1 || !(a > 0.0)) fail(ErrorKind::BadParameters, "product model needs n_s, n_t >= 1, a > 0");
    ComplexMatrix L = ComplexMatrix::Zero(n_s, n_s);
    for (int i = 0; i < n_s; ++i) {
        L(i, i) += 2.0;
        L(i, (i + 1) % n_s) -= 1.0;
        L(i, (i + n_s - 1) % n_s) -= 1.0;
    }
    const double hs = 2.0 * pi / n_s;
    const ComplexMatrix S = ComplexMatrix::Identity(n_s, n_s) + L / (hs * hs);
    ComplexMatrix T = ComplexMatrix::Zero(n_t, n_t);
    const double ht = a / (n_t + 1);
    for (int i = 0; i < n_t; ++i) {
        T(i, i) = 2.0 / (ht * ht);
        if (i + 1 < n_t) T(i, i + 1) = T(i + 1, i) = -1.0 / (ht * ht);
    }
    return product_model_from(S, T);
}

ComplexMatrix block_lambda_factor(const ProductModel& model, cplx lambda) {
    const auto& mu = model.b1_eigenvalues;
    const double scale = std::max(1.0, mu.maxCoeff());
    Eigen::VectorXcd d(mu.size());
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
        if (std::abs(mu(k) - lambda) <= 1e-13 * scale || std::abs(mu(k) + lambda) <= 1e-13 * scale)
            fail(ErrorKind::PoleHit, "lambda on the spectrum of +-B1");
        const cplx plus = 1.0 / (mu(k) - lambda), minus = 1.0 / (-mu(k) - lambda);
        d(k) = -0.5 / mu(k) * (plus - minus);
    }
    const ComplexMatrix& V = model.b1_eigenvectors;
    return V * d.asDiagonal() * V.adjoint();
}

ComplexMatrix block_resolvent(const ProductModel& model, cplx lambda) {
    const ComplexMatrix F = block_lambda_factor(model, lambda);
    const auto n = model.half_dim();
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    const ComplexMatrix left = blocks(-model.B - lambda * I, -model.S_full, -model.S_full, model.B - lambda * I);
    const ComplexMatrix Z = ComplexMatrix::Zero(n, n);
    return left * blocks(F, Z, Z, F);
}

ComplexMatrix block_projection_formula(const ProductModel& model) {
    const auto n = model.half_dim();
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    const ComplexMatrix BB = model.B * model.B1_inv;
    const ComplexMatrix SB = model.S_full * model.B1_inv;
    return blocks(0.5 * I + 0.5 * BB, 0.5 * SB, 0.5 * SB, 0.5 * I - 0.5 * BB);
}

double block_projection_crosscheck(const ProductModel& model, const FuncalcConfig& cfg) {
    if (model.A.rows() > 64) fail(ErrorKind::BadParameters, "contour cross-check limited to dim(A) <= 64");
    const CalculusReport r = sectorial_projection(model.A, {-pi / 2, pi / 2}, cfg);
    return opnorm2(block_projection_formula(model) - r.result);
}

} // namespace sectorial
