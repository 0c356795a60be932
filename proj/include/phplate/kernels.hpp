#pragma once

#include "phplate/bc.hpp"
#include "phplate/field.hpp"
#include "phplate/grid.hpp"

namespace phplate::kernels {

enum class Backend { Serial, OpenMP };

/// Process-wide default backend for the grid kernels.  Set once at startup
/// (CLI) or per test; the serial path is the reference implementation.
Backend default_backend();
void set_default_backend(Backend b);
void set_thread_cap(int threads);
int thread_cap();

/// Second-order bending jets of a ghost-extended deflection:
/// curvature fields w20, w02 at the nodes and the cross (twist) rate on the
/// (N1-1) x (N2-1) cell centers, forward differenced.
struct BendingJets {
    Field w20, w02;   // node fields
    Field twist;      // cell field, stored as (N1-1) x (N2-1)
};
BendingJets bending_jets(const GhostField& x, const Grid& g, Backend be = default_backend());

/// Bending strain energy of the ghost-closed deflection:
/// trapezoid quadrature of the curvature terms plus cell quadrature of the
/// twist term.  This is the exact quadratic form whose gradient drives the
/// momentum equation.
double bending_energy(const Field& w, const GhostClosure& closure, const PlateParams& p,
                      Backend be = default_backend());

/// Force density f = -(1/tau) dV/dw through the ghost closure; rows on
/// kinematically pinned edges are zeroed by the caller's DOF map, not here.
Field bending_force(const Field& w, const GhostClosure& closure, const PlateParams& p,
                    Backend be = default_backend());

/// Kinetic energy 1/(2 rho A) integral of p^2 (trapezoid).
double kinetic_energy(const Field& p, const Grid& g, const PlateParams& par,
                      Backend be = default_backend());

/// Deterministic row-block sum of a node field with trapezoid weights,
/// shared by the serial and OpenMP reductions.
double weighted_sum(const Field& f, const Grid& g, Backend be = default_backend());

} // namespace phplate::kernels
