#include "phplate/controller.hpp"

#include <stdexcept>

namespace phplate {

void ControllerParams::validate() const {
    if (!(c1 > 0.0 && c2 > 0.0)) throw std::invalid_argument("c1, c2 must be > 0");
    // R block positive semidefinite
    if (Rc33 < 0.0 || Rc44 < 0.0 || Rc33 * Rc44 - Rc34 * Rc34 < 0.0)
        throw std::invalid_argument("controller R block must be positive semidefinite");
    // M block positive definite
    if (!(Mc33 > 0.0) || !(Mc33 * Mc44 - Mc34 * Mc34 > 0.0))
        throw std::invalid_argument("controller M block must be positive definite");
}

double hc_value(const ControllerState& s, const ControllerParams& p) {
    const double z1 = s.xc[0] - p.xc1_d - p.us1 / p.c1;
    const double z2 = s.xc[1] - p.xc2_d - p.us2 / p.c2;
    const double x3 = s.xc[2], x4 = s.xc[3];
    return 0.5 * p.c1 * z1 * z1 + 0.5 * p.c2 * z2 * z2 +
           0.5 * (p.Mc33 * x3 * x3 + 2.0 * p.Mc34 * x3 * x4 + p.Mc44 * x4 * x4);
}

Vec4 hc_gradient(const ControllerState& s, const ControllerParams& p) {
    return {p.c1 * (s.xc[0] - p.xc1_d) - p.us1,
            p.c2 * (s.xc[1] - p.xc2_d) - p.us2,
            p.Mc33 * s.xc[2] + p.Mc34 * s.xc[3],
            p.Mc34 * s.xc[2] + p.Mc44 * s.xc[3]};
}

Vec2 controller_outputs(const ControllerState& s, const ControllerParams& p) {
    Vec4 dH = hc_gradient(s, p);
    return {dH[0] + p.G31 * dH[2] + p.G41 * dH[3],
            dH[1] + p.G32 * dH[2] + p.G42 * dH[3]};
}

Vec4 controller_rhs(const ControllerState& s, const Vec2& uc, const ControllerParams& p) {
    Vec4 dH = hc_gradient(s, p);
    // rows 1,2 of (J_c - R_c) vanish: the paired states integrate their inputs
    return {uc[0], uc[1],
            -p.Rc33 * dH[2] + (p.Jc34 - p.Rc34) * dH[3] + p.G31 * uc[0] + p.G32 * uc[1],
            (-p.Jc34 - p.Rc34) * dH[2] - p.Rc44 * dH[3] + p.G41 * uc[0] + p.G42 * uc[1]};
}

Vec2 interconnect(const Field& p, const std::vector<double>& lambda, const Grid& g, double rho_A) {
    if ((int)lambda.size() != g.N1) throw std::invalid_argument("lambda sample count mismatch");
    EdgeProfile bottom(Edge::B2, g.N1), top(Edge::B4, g.N1);
    for (int i = 0; i < g.N1; ++i) {
        bottom[i] = lambda[(size_t)i] * p(i, 0) / rho_A;
        top[i] = lambda[(size_t)i] * p(i, g.N2 - 1) / rho_A;
    }
    return {integrate_edge(bottom, g), integrate_edge(top, g)};
}

} // namespace phplate
