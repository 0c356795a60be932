#include "phplate/actuation.hpp"

#include <cmath>
#include <stdexcept>

namespace phplate {

void ActuatorParams::validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
}

void EquilibriumParams::validate() const {
    if (!(a > 0.0)) throw std::invalid_argument("a must be > 0");
    if (!(b > 0.0)) throw std::invalid_argument("b must be > 0");
}

namespace {
inline double sech2(double x) {
    double c = std::cosh(x);
    return 1.0 / (c * c);
}
} // namespace

double lambda_profile(double z1, const ActuatorParams& ap, double L1) {
    const double s = ap.sigma;
    const double u = s * z1, v = s * (z1 - 0.5 * L1);
    return 2.0 * ap.Psi * s * s * (std::tanh(u) * sech2(u) - std::tanh(v) * sech2(v));
}

double lambda_integral(const ActuatorParams& ap, double L1) {
    // antiderivative of the window's negated second derivative:
    // -Psi * d/dz [tanh(s z) - tanh(s (z - L1/2))] evaluated at the ends
    const double s = ap.sigma;
    auto dwin = [&](double z) { return s * (sech2(s * z) - sech2(s * (z - 0.5 * L1))); };
    return -ap.Psi * (dwin(L1) - dwin(0.0));
}

double desired_profile(double z1, const EquilibriumParams& ep, double L1) {
    if (z1 < 0.5 * L1) return ep.a * z1 * z1;
    return ep.b * (z1 - 0.5 * L1) + ep.a * L1 * L1 / 4.0;
}

std::vector<double> lambda_samples(const ActuatorParams& ap, const Grid& g) {
    std::vector<double> v((size_t)g.N1);
    for (int i = 0; i < g.N1; ++i) v[(size_t)i] = lambda_profile(g.z1(i), ap, g.L1);
    return v;
}

std::vector<double> desired_samples(const EquilibriumParams& ep, const Grid& g) {
    std::vector<double> v((size_t)g.N1);
    for (int i = 0; i < g.N1; ++i) v[(size_t)i] = desired_profile(g.z1(i), ep, g.L1);
    return v;
}

std::pair<double, double> controller_setpoints(const std::vector<double>& lambda,
                                               const std::vector<double>& w_d, const Grid& g) {
    if ((int)lambda.size() != g.N1 || (int)w_d.size() != g.N1)
        throw std::invalid_argument("profile sample count mismatch");
    EdgeProfile p(Edge::B2, g.N1);
    for (int i = 0; i < g.N1; ++i) p[i] = lambda[(size_t)i] * w_d[(size_t)i];
    double x = integrate_edge(p, g);
    return {x, x};
}

} // namespace phplate
