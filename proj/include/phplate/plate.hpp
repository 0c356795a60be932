#pragma once

#include <utility>
#include <vector>

#include "phplate/bc.hpp"
#include "phplate/field.hpp"
#include "phplate/grid.hpp"
#include "phplate/kernels.hpp"

namespace phplate {

/// Deflection and momentum density p = rho_A * dw/dt.
struct PlantState {
    Field w, p;

    PlantState() = default;
    PlantState(int n1, int n2) : w(n1, n2), p(n1, n2) {}
    PlantState(Field w_, Field p_) : w(std::move(w_)), p(std::move(p_)) {}
    bool all_finite() const { return w.all_finite() && p.all_finite(); }
};

/// Literal shear/moment traces on the four edges (plate sign conventions:
/// Q1 = D_E(w03 + (2-nu) w21), M1 = -D_E(w02 + nu w20) on B2/B4;
/// Q2 = -D_E(w30 + (2-nu) w12), M2 = D_E(w20 + nu w02) on B1/B3).
struct BoundaryQuantities {
    EdgeProfile Q1_bottom, M1_bottom; // B2
    EdgeProfile Q1_top, M1_top;       // B4
    EdgeProfile Q2_left, M2_left;     // B1
    EdgeProfile Q2_right, M2_right;   // B3
};

/// Per-unit-length force densities applied along the actuated edges,
/// already in the outward power convention: the energy rate they produce is
/// integral(q * dw/dt) on each edge.
struct EdgeLoads {
    std::vector<double> bottom, top;
    static EdgeLoads zero(int n1) { return {std::vector<double>(n1, 0.0), std::vector<double>(n1, 0.0)}; }
};

/// The spatially discrete plate: energy, momentum-equation right-hand side,
/// and boundary diagnostics for one grid / parameter / bc combination.
class PlateModel {
public:
    PlateModel(const Grid& g, const PlateParams& p, const BoundaryConditions& bc);

    const Grid& grid() const { return grid_; }
    const PlateParams& params() const { return par_; }
    const GhostClosure& closure() const { return closure_; }
    const BoundaryConditions& bc() const { return bc_; }

    /// nodes whose w and p are kinematically pinned to zero
    bool pinned(int i, int j) const;

    /// energy density T + V sampled at the nodes (diagnostic field; the twist
    /// term uses the centered cross stencil here)
    Field hamiltonian_density(const PlantState& s) const;

    /// conserved total energy: kinetic trapezoid plus the bending form the
    /// force is the gradient of
    double total_energy(const PlantState& s) const;
    double potential_energy(const Field& w) const;

    /// dw/dt = p/rho_A, dp/dt = bending force + boundary loads; pinned rows zero
    void rhs(const PlantState& s, const EdgeLoads& loads, PlantState& out) const;

    /// literal boundary quantities evaluated with centered stencils on a
    /// ghost-extended deflection
    BoundaryQuantities boundary_quantities(const GhostField& x) const;
    BoundaryQuantities boundary_quantities(const Field& w, const AppliedShear& q) const;

    /// boundary quantities at the actuated edges measured one-sidedly from
    /// grid data alone (no ghost information); used by the energy audit
    void measured_actuated_quantities(const Field& w, EdgeProfile& Q1b, EdgeProfile& M1b,
                                      EdgeProfile& Q1t, EdgeProfile& M1t) const;

    /// boundary-port power: orientation-signed edge sum of (Q v + M v'),
    /// with the actuated-edge quantities measured from the field
    double port_power(const PlantState& s) const;

private:
    Grid grid_;
    PlateParams par_;
    BoundaryConditions bc_;
    GhostClosure closure_;
};

/// Centered-in-time power-balance residuals over a uniformly spaced record:
/// r_k = [H_{k+1} - H_{k-1}]/(2 dt) - (P_{k-1} + 2 P_k + P_{k+1})/4.
/// Needs at least 3 samples.
std::vector<double> power_balance_residual(const std::vector<double>& H,
                                           const std::vector<double>& port_power, double dt);

} // namespace phplate
