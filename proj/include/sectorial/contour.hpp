#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "sectorial/linalg.hpp"
#include "sectorial/quadrature.hpp"

namespace sectorial {

inline constexpr double default_cut_margin = 1e-12;

/// Cut along the closed ray e^{i theta} [0, inf).
struct BranchAngle {
    double theta = 0.0;
};

/// Sector theta < arg < phi, with theta < phi < theta + 2 pi.
struct SectorPair {
    double theta = 0.0;
    double phi = 0.0;

    void validate() const;
};

double arg_branch(cplx lambda, BranchAngle cut, double cut_margin = default_cut_margin);
cplx log_branch(cplx lambda, BranchAngle cut, double cut_margin = default_cut_margin);
cplx pow_branch(cplx lambda, cplx s, BranchAngle cut, double cut_margin = default_cut_margin);

struct LaurentLoop {
    double theta;
    double r0;
    double R;
};

struct Sectorial {
    double theta;
    double phi;
    double r0;
    double R;
};

struct Circle {
    cplx center;
    double radius;
};

using ContourKind = std::variant<LaurentLoop, Sectorial, Circle>;

/// z = r e^{i angle}, traversed from r_from to r_to (either direction).
struct RadialLeg {
    double angle;
    double r_from;
    double r_to;
};

/// z = center + radius e^{i w}, w from angle_from to angle_to.
struct ArcLeg {
    cplx center;
    double radius;
    double angle_from;
    double angle_to;
};

using Leg = std::variant<RadialLeg, ArcLeg>;

/// A quadrature node. `log_z` is log|z| + i * (parameter angle of the leg),
/// so on a cut leg it carries the branch value belonging to that side.
struct ContourNode {
    cplx z;
    cplx log_z;
    cplx weight;
};

struct Contour {
    ContourKind kind;
    std::vector<Leg> legs;
    QuadratureConfig quadrature;

    /// Nodes at refinement level `level` (panel counts times 2^level).
    std::vector<ContourNode> nodes(int level = 0) const;
    Contour reversed() const;
};

Contour build_contour(const ContourKind& kind, const QuadratureConfig& quadrature = {});

/// Contour made of arbitrary legs (used for tail pieces and partial loops).
Contour contour_from_legs(std::vector<Leg> legs, const QuadratureConfig& quadrature = {});

using MatrixIntegrand = std::function<ComplexMatrix(const ContourNode&)>;
using ScalarIntegrand = std::function<cplx(const ContourNode&)>;

struct IntegrationResult {
    ComplexMatrix value;
    double residual = 0.0;   // spectral norm of the last doubling difference
    double scale = 0.0;      // max(|I|, 1e-2 * sum |w| |f|), the convergence yardstick
    int level = 0;
};

IntegrationResult integrate_report(const Contour& contour, const MatrixIntegrand& f);
ComplexMatrix integrate(const Contour& contour, const MatrixIntegrand& f);
cplx integrate_scalar(const Contour& contour, const ScalarIntegrand& f);

} // namespace sectorial
