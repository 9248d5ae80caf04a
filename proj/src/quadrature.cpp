#include "sectorial/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <gsl/gsl_integration.h>

#include "sectorial/error.hpp"

namespace sectorial {

void QuadratureConfig::validate() const {
    if (nodes_per_panel < 2 || max_panel_doublings < 0 || !(rel_tol > 0.0) || !(rel_tol < 1.0)) {
        fail(ErrorKind::BadParameters, "QuadratureConfig: need nodes_per_panel >= 2, 0 < rel_tol < 1");
    }
}

const GaussRule& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        auto rule = std::make_unique<GaussRule>();
        gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
        rule->x.resize(n);
        rule->w.resize(n);
        for (int i = 0; i < n; ++i) {
            gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &rule->x[i], &rule->w[i], t);
        }
        gsl_integration_glfixed_table_free(t);
        slot = std::move(rule);
    }
    return *slot;
}

cplx integrate_interval(const std::function<cplx(double)>& f, double a, double b,
                        int base_panels, const QuadratureConfig& cfg, double abs_floor) {
    cfg.validate();
    const auto& rule = gauss_legendre(cfg.nodes_per_panel);
    int panels = std::max(1, base_panels);
    cplx prev = composite_gl(f, a, b, panels, rule);
    for (int level = 1; level <= cfg.max_panel_doublings; ++level) {
        panels *= 2;
        const cplx cur = composite_gl(f, a, b, panels, rule);
        const double diff = std::abs(cur - prev);
        if (diff <= std::max(cfg.rel_tol * std::abs(cur), abs_floor)) return cur;
        prev = cur;
    }
    std::ostringstream os;
    os << "interval [" << a << ", " << b << "] did not converge; last value " << prev;
    fail(ErrorKind::NoConvergence, os.str());
}

} // namespace sectorial
