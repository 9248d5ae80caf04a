#pragma once

#include "sectorial/funcalc.hpp"

namespace sectorial {

/// A = [[B, S], [S, -B]] on a tensor grid: B = T1d (x) I + I (x) S.
struct ProductModel {
    ComplexMatrix S;        // closed factor, n_s x n_s
    ComplexMatrix T1d;      // Dirichlet -d^2/dx^2 on (0, a), n_t x n_t
    ComplexMatrix B;
    ComplexMatrix S_full;   // I (x) S
    ComplexMatrix B1;       // (B^2 + S_full^2)^{1/2}
    ComplexMatrix B1_inv;
    ComplexMatrix A;
    Eigen::VectorXd b1_eigenvalues;   // ascending
    ComplexMatrix b1_eigenvectors;

    int half_dim() const { return static_cast<int>(B.rows()); }
};

/// S = periodic second difference on n_s points of [0, 2pi) plus I;
/// T1d = Dirichlet second difference with h = a / (n_t + 1).
ProductModel build_product_model(int n_s, int n_t, double a);

/// Same assembly from given Hermitian positive factors.
ProductModel product_model_from(const ComplexMatrix& S, const ComplexMatrix& T1d);

/// (lambda^2 - B1^2)^{-1} = -1/2 B1^{-1} [(B1 - lambda)^{-1} - (-B1 - lambda)^{-1}].
ComplexMatrix block_lambda_factor(const ProductModel& model, cplx lambda);

/// [[-B - lambda, -S], [-S, B - lambda]] (lambda^2 - B^2 - S^2)^{-1}. PoleHit on the spectrum of +-B1.
ComplexMatrix block_resolvent(const ProductModel& model, cplx lambda);

/// [[1/2 + 1/2 B B1^{-1}, 1/2 S B1^{-1}], [1/2 S B1^{-1}, 1/2 - 1/2 B B1^{-1}]].
ComplexMatrix block_projection_formula(const ProductModel& model);

/// || formula - sectorial_projection(A, (-pi/2, pi/2)) ||_2.
double block_projection_crosscheck(const ProductModel& model, const FuncalcConfig& cfg = {});

} // namespace sectorial
