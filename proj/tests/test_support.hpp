#pragma once

#include <random>

#include "sectorial/linalg.hpp"

namespace testing_support {

using sectorial::ComplexMatrix;
using sectorial::cplx;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = scale * cplx(g(rng), g(rng));
    return M;
}

/// V diag(values) V^{-1} with V = I + perturbation (well conditioned).
inline ComplexMatrix with_spectrum(std::mt19937_64& rng, const std::vector<cplx>& values, double perturb = 0.3) {
    const int n = static_cast<int>(values.size());
    ComplexMatrix V = ComplexMatrix::Identity(n, n) + random_matrix(rng, n, perturb / std::sqrt(double(n)));
    ComplexMatrix D = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = values[i];
    return V * D * V.inverse();
}

inline double maxabs(const ComplexMatrix& M) { return M.cwiseAbs().maxCoeff(); }

} // namespace testing_support
