#include "sectorial/contour.hpp"

#include <cmath>
#include <sstream>

#include "sectorial/error.hpp"

namespace sectorial {

namespace {

constexpr double two_pi = 2.0 * pi;
constexpr double radial_panel_width = 1.0;   // in log r
constexpr double arc_panel_width = pi / 4.0; // in angle

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

int base_panels(const Leg& leg) {
    return std::visit(overloaded{
        [](const RadialLeg& r) {
            const double span = std::abs(std::log(r.r_to / r.r_from));
            return std::max(1, static_cast<int>(std::ceil(span / radial_panel_width - 1e-9)));
        },
        [](const ArcLeg& a) {
            const double span = std::abs(a.angle_to - a.angle_from);
            return std::max(1, static_cast<int>(std::ceil(span / arc_panel_width - 1e-9)));
        }}, leg);
}

void append_nodes(const Leg& leg, int level, const GaussRule& rule, std::vector<ContourNode>& out) {
    const int panels = base_panels(leg) << level;
    std::visit(overloaded{
        [&](const RadialLeg& r) {
            const cplx dir = std::polar(1.0, r.angle);
            const double u0 = std::log(r.r_from), u1 = std::log(r.r_to);
            const double h = (u1 - u0) / panels;
            for (int p = 0; p < panels; ++p) {
                const double mid = u0 + (p + 0.5) * h;
                for (std::size_t k = 0; k < rule.x.size(); ++k) {
                    const double u = mid + 0.5 * h * rule.x[k];
                    const cplx z = std::exp(u) * dir;
                    out.push_back({z, cplx(u, r.angle), z * (0.5 * h * rule.w[k])});
                }
            }
        },
        [&](const ArcLeg& a) {
            const double h = (a.angle_to - a.angle_from) / panels;
            const bool centered = a.center == cplx(0.0, 0.0);
            for (int p = 0; p < panels; ++p) {
                const double mid = a.angle_from + (p + 0.5) * h;
                for (std::size_t k = 0; k < rule.x.size(); ++k) {
                    const double w = mid + 0.5 * h * rule.x[k];
                    const cplx e = std::polar(a.radius, w);
                    const cplx z = a.center + e;
                    const cplx lz = centered ? cplx(std::log(a.radius), w) : std::log(z);
                    out.push_back({z, lz, I_unit * e * (0.5 * h * rule.w[k])});
                }
            }
        }}, leg);
}

void check_radii(double r0, double R) {
    if (!(r0 > 0.0) || !(R > r0) || !std::isfinite(R)) {
        fail(ErrorKind::BadParameters, "contour radii need 0 < r0 < R < inf");
    }
}

} // namespace

void SectorPair::validate() const {
    if (!std::isfinite(theta) || !std::isfinite(phi) || !(theta < phi) || !(phi < theta + two_pi)) {
        fail(ErrorKind::BadParameters, "sector needs theta < phi < theta + 2 pi");
    }
}

double arg_branch(cplx lambda, BranchAngle cut, double cut_margin) {
    if (lambda == cplx(0.0, 0.0) || !std::isfinite(cut.theta)) {
        fail(ErrorKind::OnCut, "argument undefined at 0");
    }
    // x = arg(lambda) - theta reduced to (-2 pi, 0]
    double x = std::remainder(std::arg(lambda) - cut.theta, two_pi);
    if (x > 0.0) x -= two_pi;
    if (x > -cut_margin || x < -two_pi + cut_margin) {
        std::ostringstream os;
        os << lambda << " lies on the cut at angle " << cut.theta;
        fail(ErrorKind::OnCut, os.str());
    }
    return cut.theta + x;
}

cplx log_branch(cplx lambda, BranchAngle cut, double cut_margin) {
    return {std::log(std::abs(lambda)), arg_branch(lambda, cut, cut_margin)};
}

cplx pow_branch(cplx lambda, cplx s, BranchAngle cut, double cut_margin) {
    return std::exp(s * log_branch(lambda, cut, cut_margin));
}

Contour build_contour(const ContourKind& kind, const QuadratureConfig& quadrature) {
    quadrature.validate();
    Contour c{kind, {}, quadrature};
    std::visit(overloaded{
        [&](const LaurentLoop& L) {
            check_radii(L.r0, L.R);
            if (!std::isfinite(L.theta)) fail(ErrorKind::BadParameters, "loop angle not finite");
            c.legs = {RadialLeg{L.theta, L.R, L.r0},
                      ArcLeg{0.0, L.r0, L.theta, L.theta - two_pi},
                      RadialLeg{L.theta - two_pi, L.r0, L.R}};
        },
        [&](const Sectorial& S) {
            check_radii(S.r0, S.R);
            SectorPair{S.theta, S.phi}.validate();
            c.legs = {RadialLeg{S.phi, S.R, S.r0},
                      ArcLeg{0.0, S.r0, S.phi, S.theta},
                      RadialLeg{S.theta, S.r0, S.R}};
        },
        [&](const Circle& C) {
            if (!(C.radius > 0.0) || !std::isfinite(C.radius) || !std::isfinite(std::abs(C.center))) {
                fail(ErrorKind::BadParameters, "circle radius must be positive");
            }
            c.legs = {ArcLeg{C.center, C.radius, 0.0, two_pi}};
        }}, kind);
    return c;
}

Contour contour_from_legs(std::vector<Leg> legs, const QuadratureConfig& quadrature) {
    quadrature.validate();
    return Contour{Circle{0.0, 1.0}, std::move(legs), quadrature};
}

std::vector<ContourNode> Contour::nodes(int level) const {
    const auto& rule = gauss_legendre(quadrature.nodes_per_panel);
    std::vector<ContourNode> out;
    for (const auto& leg : legs) append_nodes(leg, level, rule, out);
    return out;
}

Contour Contour::reversed() const {
    Contour r = *this;
    r.legs.assign(legs.rbegin(), legs.rend());
    for (auto& leg : r.legs) {
        std::visit(overloaded{
            [](RadialLeg& l) { std::swap(l.r_from, l.r_to); },
            [](ArcLeg& a) { std::swap(a.angle_from, a.angle_to); }}, leg);
    }
    return r;
}

IntegrationResult integrate_report(const Contour& contour, const MatrixIntegrand& f) {
    const auto& cfg = contour.quadrature;
    ComplexMatrix prev;
    double prev_norm = 0.0;
    double prev_scale = 0.0;
    for (int level = 0; level <= cfg.max_panel_doublings; ++level) {
        ComplexMatrix sum;
        double mass = 0.0;
        for (const auto& node : contour.nodes(level)) {
            ComplexMatrix v = f(node);
            if (sum.size() == 0) sum = ComplexMatrix::Zero(v.rows(), v.cols());
            if (!v.allFinite()) fail(ErrorKind::NoConvergence, "integrand not finite at a node");
            mass += std::abs(node.weight) * v.cwiseAbs().maxCoeff();
            sum.noalias() += node.weight * v;
        }
        const double norm = opnorm2(sum);
        if (level > 0) {
            const double diff = opnorm2(sum - prev);
            const double scale = std::max(norm, 1e-2 * mass);
            if (diff <= cfg.rel_tol * scale) return {std::move(sum), diff, scale, level};
            if (level == cfg.max_panel_doublings) {
                std::ostringstream os;
                os << "after " << level << " doublings: |I_prev| = " << prev_norm << ", |I_last| = " << norm
                   << ", |difference| = " << diff;
                fail(ErrorKind::NoConvergence, os.str());
            }
        }
        prev = std::move(sum);
        prev_norm = norm;
        prev_scale = std::max(norm, 1e-2 * mass);
    }
    // max_panel_doublings == 0: single evaluation, no estimate available
    return {std::move(prev), 0.0, prev_scale, 0};
}

ComplexMatrix integrate(const Contour& contour, const MatrixIntegrand& f) {
    return integrate_report(contour, f).value;
}

cplx integrate_scalar(const Contour& contour, const ScalarIntegrand& f) {
    return integrate(contour, [&](const ContourNode& n) {
        ComplexMatrix m(1, 1);
        m(0, 0) = f(n);
        return m;
    })(0, 0);
}

} // namespace sectorial
