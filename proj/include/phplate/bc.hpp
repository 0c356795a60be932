#pragma once

#include <array>
#include <optional>
#include <vector>

#include "phplate/field.hpp"
#include "phplate/grid.hpp"

namespace phplate {

enum class BoundaryKind {
    Clamped,        // w = 0, w_[10] = 0
    Free,           // Q = 0, M = 0
    ActuatedShear,  // Q = prescribed, M = 0
    SimplySupported // w = 0, M = 0 (test configurations only)
};

/// Per-edge boundary condition assignment, indexed by Edge.
struct BoundaryConditions {
    std::array<BoundaryKind, 4> kind = {BoundaryKind::Clamped, BoundaryKind::ActuatedShear,
                                        BoundaryKind::Free, BoundaryKind::ActuatedShear};

    BoundaryKind operator[](Edge e) const { return kind[(size_t)e]; }

    static BoundaryConditions plate_default() { return BoundaryConditions{}; }
    static BoundaryConditions simply_supported() {
        BoundaryConditions bc;
        bc.kind.fill(BoundaryKind::SimplySupported);
        return bc;
    }

    bool is_simply_supported() const;
    /// Only the reference plate layout and the all-simply-supported test
    /// layout have a ghost closure; anything else is rejected.
    void validate() const;
};

/// Prescribed literal shear Q1 on the two actuated edges (values along z1).
struct AppliedShear {
    std::vector<double> bottom; // edge B2 (z2 = 0)
    std::vector<double> top;    // edge B4 (z2 = L2)

    static AppliedShear zero(int n1) { return {std::vector<double>(n1, 0.0), std::vector<double>(n1, 0.0)}; }
};

/// One ghost value expressed through earlier-defined entries of the
/// extended field, plus an optional affine term from the applied shear.
struct GhostTerm {
    int src;
    double c;
};
struct GhostRule {
    int target;
    std::vector<GhostTerm> terms;
    int q_channel = -1; // 0 = bottom edge shear, 1 = top
    int q_index = 0;
    double q_coeff = 0.0;
};

/// Ordered, sequentially substitutable ghost-fill rules for one grid /
/// boundary-condition layout.  apply() fills ghosts top-down; adjoint()
/// folds ghost gradient entries back onto their sources bottom-up, which
/// makes the bending force the exact gradient of the ghost-closed energy.
class GhostClosure {
public:
    GhostClosure() = default;
    GhostClosure(const Grid& g, const PlateParams& p, const BoundaryConditions& bc);

    void apply(GhostField& x, const AppliedShear& q) const;
    void apply_homogeneous(GhostField& x) const;
    void adjoint(GhostField& grad) const;

    const Grid& grid() const { return *grid_; }
    const BoundaryConditions& bc() const { return bc_; }

private:
    const Grid* grid_ = nullptr;
    BoundaryConditions bc_;
    std::vector<GhostRule> rules_;

    void build_plate(const Grid& g, const PlateParams& p);
    void build_simply_supported(const Grid& g);
};

/// Ghost-extend a deflection field under the given boundary conditions.
/// Interior values are copied unchanged; the two ghost layers per edge are
/// chosen so the discrete boundary relations hold at the edge nodes.
GhostField extend_with_bc(const Field& w, const GhostClosure& closure, const AppliedShear& q);
GhostField extend_with_bc(const Field& w, const GhostClosure& closure);

} // namespace phplate
