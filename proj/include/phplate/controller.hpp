#pragma once

#include <array>

#include "phplate/field.hpp"
#include "phplate/grid.hpp"
#include "phplate/plate.hpp"

namespace phplate {

using Vec2 = std::array<double, 2>;
using Vec4 = std::array<double, 4>;

/// Four-state port-Hamiltonian controller: two Casimir-paired integrator
/// states and a two-state damping block.
struct ControllerParams {
    double c1 = 5.0, c2 = 5.0;             // energy-shaping stiffness
    double Jc34 = 1.0;                      // damping-block interconnection
    double Rc33 = 15.0, Rc34 = 1.0, Rc44 = 15.0;
    double G31 = 1.0, G32 = 0.0, G41 = 0.0, G42 = 1.0;
    double Mc33 = 25.0, Mc34 = 5.0, Mc44 = 25.0;
    double us1 = -1.0, us2 = -1.0;          // steady-state voltages
    double xc1_d = 0.0, xc2_d = 0.0;        // set-points (from the target profile)

    void validate() const;
};

struct ControllerState {
    Vec4 xc{0.0, 0.0, 0.0, 0.0};
};

/// Controller Hamiltonian value.
double hc_value(const ControllerState& s, const ControllerParams& p);

/// Gradient of the controller Hamiltonian.
Vec4 hc_gradient(const ControllerState& s, const ControllerParams& p);

/// Collocated outputs y_c (the plant receives u = -y_c).
Vec2 controller_outputs(const ControllerState& s, const ControllerParams& p);

/// State derivative for controller inputs u_c.
Vec4 controller_rhs(const ControllerState& s, const Vec2& uc, const ControllerParams& p);

/// Boundary interconnection: u_c^l = edge integral of lambda * p / rho_A over
/// the actuated edge l (B2 for channel 1, B4 for channel 2).
Vec2 interconnect(const Field& p, const std::vector<double>& lambda, const Grid& g, double rho_A);

} // namespace phplate
