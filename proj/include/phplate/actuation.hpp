#pragma once

#include <vector>

#include "phplate/grid.hpp"

namespace phplate {

/// Piezo-style actuator characteristic: a double tanh window of sharpness
/// sigma differentiated twice, scaled by Psi.
struct ActuatorParams {
    double Psi = 4.0;
    double sigma = 10.0;

    void validate() const;
};

/// Target edge configuration: parabolic up to L1/2, linear ramp after.
struct EquilibriumParams {
    double a = 0.1368;
    double b = 0.1315;

    void validate() const;
};

/// Closed-form actuator force density at z1 (no finite differencing):
/// 2 Psi sigma^2 [tanh(s z) sech^2(s z) - tanh(s (z - L1/2)) sech^2(s (z - L1/2))].
double lambda_profile(double z1, const ActuatorParams& ap, double L1);

/// Closed-form integral of lambda_profile over [0, L1].
double lambda_integral(const ActuatorParams& ap, double L1);

/// Desired deflection profile over the actuated edge.
double desired_profile(double z1, const EquilibriumParams& ep, double L1);

/// Samples of the two profiles on the actuated-edge grid.
std::vector<double> lambda_samples(const ActuatorParams& ap, const Grid& g);
std::vector<double> desired_samples(const EquilibriumParams& ep, const Grid& g);

/// Controller set-points: x_c^{l,d} = edge integral of lambda * w_d with
/// zero Casimir offsets (plant and paired controller states start at zero).
/// Both actuators share the same profile, so the two set-points coincide.
std::pair<double, double> controller_setpoints(const std::vector<double>& lambda,
                                               const std::vector<double>& w_d, const Grid& g);

} // namespace phplate
