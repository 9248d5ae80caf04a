#include "sectorial/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "sectorial/contour.hpp"
#include "sectorial/error.hpp"

namespace sectorial {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ClusterOverlap: return "ClusterOverlap";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::OnCut: return "OnCut";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::SpectrumOnCut: return "SpectrumOnCut";
    case ErrorKind::FormsDisagree: return "FormsDisagree";
    case ErrorKind::SingularOperator: return "SingularOperator";
    case ErrorKind::BranchViolation: return "BranchViolation";
    case ErrorKind::DiagonalDivergence: return "DiagonalDivergence";
    case ErrorKind::TooSlowDecay: return "TooSlowDecay";
    case ErrorKind::SpectrumHit: return "SpectrumHit";
    case ErrorKind::TailUnknown: return "TailUnknown";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::IndexViolation: return "IndexViolation";
    case ErrorKind::UnknownExperiment: return "UnknownExperiment";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    }
    return "Unknown";
}

void require_square_finite(const ComplexMatrix& A, const char* who) {
    if (A.rows() != A.cols() || A.rows() == 0) {
        fail(ErrorKind::BadParameters, std::string(who) + ": matrix must be square and non-empty");
    }
    if (!A.allFinite()) {
        fail(ErrorKind::BadParameters, std::string(who) + ": non-finite entry");
    }
}

ComplexMatrix lu_solve(const ComplexMatrix& A, const ComplexMatrix& rhs) {
    require_square_finite(A, "lu_solve");
    if (rhs.rows() != A.rows()) {
        fail(ErrorKind::BadParameters, "lu_solve: rhs row count differs from dim");
    }
    const auto n = A.rows();
    const double row_norm = A.cwiseAbs().rowwise().sum().maxCoeff();
    Eigen::PartialPivLU<ComplexMatrix> lu(A);
    const double threshold = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * row_norm;
    const auto& LU = lu.matrixLU();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (row_norm == 0.0 || std::abs(LU(i, i)) < threshold) {
            std::ostringstream os;
            os << "pivot " << i << " has magnitude " << std::abs(LU(i, i)) << " < " << threshold;
            fail(ErrorKind::SingularMatrix, os.str());
        }
    }
    return lu.solve(rhs);
}

std::vector<cplx> eigenvalues(const ComplexMatrix& A) {
    require_square_finite(A, "eigenvalues");
    Eigen::ComplexEigenSolver<ComplexMatrix> es(A, false);
    if (es.info() != Eigen::Success) {
        fail(ErrorKind::NoConvergence, "QR iteration did not converge");
    }
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

namespace {

struct Cluster {
    std::vector<cplx> members;
    cplx center;
    double spread = 0.0;
};

std::vector<Cluster> cluster_spectrum(const std::vector<cplx>& ev, double tol) {
    const std::size_t n = ev.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(ev[i] - ev[j]) <= tol) parent[find(i)] = find(j);

    std::vector<Cluster> out;
    std::vector<long> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<long>(out.size());
            out.emplace_back();
        }
        out[slot[r]].members.push_back(ev[i]);
    }
    for (auto& c : out) {
        cplx s{0.0, 0.0};
        for (auto z : c.members) s += z;
        c.center = s / static_cast<double>(c.members.size());
        for (auto z : c.members) c.spread = std::max(c.spread, std::abs(z - c.center));
    }
    // deterministic order: by real part, then imaginary part
    std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
        if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
        return a.center.imag() < b.center.imag();
    });
    return out;
}

} // namespace

std::vector<SpectralComponent> eig_oracle(const ComplexMatrix& A) {
    require_square_finite(A, "eig_oracle");
    if (A.rows() > 64) fail(ErrorKind::BadParameters, "eig_oracle: dim > 64");
    const auto ev = eigenvalues(A);
    double rho = 0.0;
    for (auto z : ev) rho = std::max(rho, std::abs(z));
    const double scale = std::max({rho, 1e-3 * A.norm(), 1e-300});
    const auto clusters = cluster_spectrum(ev, 1e-4 * scale);

    const auto n = A.rows();
    const ComplexMatrix Id = ComplexMatrix::Identity(n, n);
    std::vector<SpectralComponent> out;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const auto& cl = clusters[c];
        double radius = std::max({0.5 * std::max(rho, 1.0), 2.0 * cl.spread});
        for (std::size_t d = 0; d < clusters.size(); ++d) {
            if (d == c) continue;
            const double gap = std::abs(cl.center - clusters[d].center) - cl.spread - clusters[d].spread;
            radius = std::min(radius, cl.spread + 0.5 * gap);
        }
        if (radius <= cl.spread || radius - cl.spread < 1e-8 * std::max(rho, 1e-300)) {
            fail(ErrorKind::ClusterOverlap, "eigenvalue clusters cannot be separated by disjoint circles");
        }
        const auto contour = build_contour(Circle{cl.center, radius}, QuadratureConfig{16, 10, 1e-13});
        ComplexMatrix P = integrate(contour, [&](const ContourNode& node) {
            return ComplexMatrix(lu_solve(A - node.z * Id, Id) * (I_unit / (2.0 * pi)));
        });
        out.push_back({cl.center, static_cast<int>(cl.members.size()), std::move(P)});
    }
    return out;
}

double opnorm2(const ComplexMatrix& A) {
    if (A.size() == 0) return 0.0;
    if (std::max(A.rows(), A.cols()) <= 64) {
        Eigen::JacobiSVD<ComplexMatrix> svd(A);
        return svd.singularValues()(0);
    }
    Eigen::BDCSVD<ComplexMatrix> svd(A);
    return svd.singularValues()(0);
}

ComplexMatrix matexp_oracle(const ComplexMatrix& A) {
    require_square_finite(A, "matexp_oracle");
    if (A.cwiseAbs().rowwise().sum().maxCoeff() > 700.0 * 1024.0) {
        fail(ErrorKind::Overflow, "matexp_oracle: norm beyond representable scaling");
    }
    ComplexMatrix E = A.exp();
    if (!E.allFinite()) fail(ErrorKind::Overflow, "matexp_oracle: result overflowed");
    return E;
}

} // namespace sectorial
