#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace sectorial {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I_unit{0.0, 1.0};

/// Throws BadParameters unless A is square with finite entries.
void require_square_finite(const ComplexMatrix& A, const char* who);

ComplexMatrix lu_solve(const ComplexMatrix& A, const ComplexMatrix& rhs);

struct SpectralComponent {
    cplx eigenvalue;
    int multiplicity;
    ComplexMatrix projector;
};

/// Eigenvalues only (Hessenberg + shifted QR), in solver order.
std::vector<cplx> eigenvalues(const ComplexMatrix& A);

/// Clusters eigenvalues and returns one Riesz projector per cluster,
/// each obtained by integrating the resolvent over a small circle.
std::vector<SpectralComponent> eig_oracle(const ComplexMatrix& A);

double opnorm2(const ComplexMatrix& A);

ComplexMatrix matexp_oracle(const ComplexMatrix& A);

} // namespace sectorial
