#pragma once

#include "phplate/controller.hpp"
#include "phplate/plate.hpp"

namespace phplate {

/// Boundary observer gains and measurement placement.  Measurements are the
/// deflection and velocity at z1 = 3 L1 / 4 on each actuated edge, so the
/// grid must place a node there (N1 = 1 mod 4).
struct ObserverParams {
    double k1 = 2000.0, k2 = 2000.0;   // energy-shaping gains
    double Kd11 = 2000.0, Kd22 = 2000.0; // damping-injection gains
    bool mollify = false;              // smear the point injection over 3 nodes
    bool correction_enabled = true;    // test facility: force k_hat to zero

    void validate() const;
    static int measurement_node(const Grid& g);
};

struct ObserverState {
    Field w_hat, p_hat;

    ObserverState() = default;
    ObserverState(int n1, int n2) : w_hat(n1, n2), p_hat(n1, n2) {}
    bool all_finite() const { return w_hat.all_finite() && p_hat.all_finite(); }
};

/// Point measurements taken from the plant.
struct Measurements {
    double ybar1 = 0.0, ybar2 = 0.0; // deflections at the two sites
    double y1 = 0.0, y2 = 0.0;       // velocities

    static Measurements take(const PlantState& plant, const Grid& g, double rho_A);
};

/// Error-injection scalars: energy shaping plus damping injection,
/// k = -k_es (ybar - w_hat(m)) - K_d (y - p_hat(m)/rho_A) per channel.
Vec2 correction_terms(const Measurements& m, const ObserverState& s, const ObserverParams& op,
                      const Grid& g, double rho_A);

/// Discrete point-injection weights along an actuated edge: quadrature of
/// weight * test recovers test(measurement node) exactly under the edge
/// trapezoid rule.  With mollify the unit mass spreads over three nodes.
std::vector<double> dirac_weights(const Grid& g, bool mollify);

/// Observer dynamics: a copy of the plant driven by the same actuator inputs
/// with the correction terms injected at the measurement nodes.
/// u holds the two actuator voltages, lambda the shared profile samples.
void observer_rhs(const ObserverState& s, const Vec2& u, const Vec2& k_hat,
                  const std::vector<double>& lambda, const PlateModel& model,
                  const ObserverParams& op, ObserverState& out);

/// Error energies: the plate energy of (w - w_hat, p - p_hat) and the shaped
/// variant with the measurement-site penalty terms.
std::pair<double, double> error_energies(const PlantState& plant, const ObserverState& obs,
                                         const ObserverParams& op, const PlateModel& model);

} // namespace phplate
