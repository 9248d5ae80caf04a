#pragma once

#include <functional>
#include <vector>

#include "sectorial/linalg.hpp"

namespace sectorial {

struct QuadratureConfig {
    int nodes_per_panel = 16;
    int max_panel_doublings = 8;
    double rel_tol = 1e-12;

    void validate() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

const GaussRule& gauss_legendre(int n);

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
template <class F>
auto composite_gl(const F& f, double a, double b, int panels, const GaussRule& rule) {
    using R = decltype(f(a));
    R sum{};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t k = 0; k < rule.x.size(); ++k) {
            sum += f(mid + 0.5 * h * rule.x[k]) * (0.5 * h * rule.w[k]);
        }
    }
    return sum;
}

/// Scalar composite rule with panel doubling until two successive results
/// agree to rel_tol (relative) or abs_floor. Throws NoConvergence otherwise.
cplx integrate_interval(const std::function<cplx(double)>& f, double a, double b,
                        int base_panels, const QuadratureConfig& cfg, double abs_floor = 0.0);

} // namespace sectorial
