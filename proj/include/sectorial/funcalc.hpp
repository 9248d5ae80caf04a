#pragma once

#include <optional>

#include "sectorial/contour.hpp"

namespace sectorial {

struct FuncalcConfig {
    QuadratureConfig quadrature{16, 8, 1e-12};
    double angular_margin = 1e-3;   // spectrum vs. cut rays
    double tail_tol = 1e-12;        // target for ||A|| (1 + log R) / R
    std::optional<double> r0;       // overrides eigenvalue-aware sizing
    std::optional<double> R;
};

struct CalculusReport {
    ComplexMatrix result;
    Contour contour;
    double quadrature_residual = 0.0;
    double truncation_estimate = 0.0;
    double forms_difference = 0.0;
};

CalculusReport sectorial_projection(const ComplexMatrix& A, SectorPair sector,
                                    const FuncalcConfig& cfg = {});

CalculusReport log_theta(const ComplexMatrix& A, BranchAngle cut, const FuncalcConfig& cfg = {});

CalculusReport log_difference_projection(const ComplexMatrix& A, SectorPair sector,
                                         const FuncalcConfig& cfg = {});

ComplexMatrix projection_eigoracle(const ComplexMatrix& A, SectorPair sector);

struct KeyholeConfig {
    QuadratureConfig quadrature{16, 10, 1e-13};
    double r0 = 0.25;
    double R = 1e8;
};

/// || int_{C_theta} log_theta f - int_{C_phi} log_phi f + 2 pi i int_Gamma f ||
/// over contours truncated at the same r0 and R.
double verify_keyhole(const MatrixIntegrand& f, SectorPair sector, const KeyholeConfig& cfg = {});

struct LoopLimitSample {
    double N;
    cplx quadrature;
    cplx closed_form;
    double difference;
};

/// int over the Laurent loop truncated at N of lambda^{-s-1} log lambda,
/// by quadrature and by its antiderivative.
std::vector<LoopLimitSample> truncated_loop_limit_check(double s, BranchAngle cut,
                                                        const std::vector<double>& N_list,
                                                        double r0 = 0.5,
                                                        const QuadratureConfig& quad = {16, 10, 1e-14});

} // namespace sectorial
