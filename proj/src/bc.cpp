#include "phplate/bc.hpp"

#include <stdexcept>

namespace phplate {

bool BoundaryConditions::is_simply_supported() const {
    for (auto k : kind)
        if (k != BoundaryKind::SimplySupported) return false;
    return true;
}

void BoundaryConditions::validate() const {
    if (is_simply_supported()) return;
    bool plate = kind[(size_t)Edge::B1] == BoundaryKind::Clamped &&
                 kind[(size_t)Edge::B2] == BoundaryKind::ActuatedShear &&
                 kind[(size_t)Edge::B3] == BoundaryKind::Free &&
                 kind[(size_t)Edge::B4] == BoundaryKind::ActuatedShear;
    if (!plate)
        throw std::invalid_argument(
            "unsupported boundary-condition layout: expected clamped B1 / actuated B2,B4 / "
            "free B3, or simply-supported on all edges");
}

GhostClosure::GhostClosure(const Grid& g, const PlateParams& p, const BoundaryConditions& bc)
    : grid_(&g), bc_(bc) {
    bc.validate();
    if (bc.is_simply_supported())
        build_simply_supported(g);
    else
        build_plate(g, p);
}

namespace {
struct RuleBuilder {
    const Grid& g;
    std::vector<GhostRule>& rules;
    GhostRule* r = nullptr;

    int id(int i, int j) const { return (i + 2) * (g.N2 + 4) + (j + 2); }
    RuleBuilder& rule(int i, int j) {
        rules.push_back(GhostRule{id(i, j), {}, -1, 0, 0.0});
        r = &rules.back();
        return *this;
    }
    RuleBuilder& t(int i, int j, double c) {
        if (c != 0.0) r->terms.push_back(GhostTerm{id(i, j), c});
        return *this;
    }
    RuleBuilder& q(int channel, int index, double coeff) {
        r->q_channel = channel;
        r->q_index = index;
        r->q_coeff = coeff;
        return *this;
    }
};
} // namespace

void GhostClosure::build_plate(const Grid& g, const PlateParams& p) {
    const int N1 = g.N1, N2 = g.N2;
    const double nu = p.nu;
    const double r21 = g.dz2 * g.dz2 / (g.dz1 * g.dz1); // dz2^2/dz1^2
    const double r12 = g.dz1 * g.dz1 / (g.dz2 * g.dz2);
    RuleBuilder b{g, rules_, nullptr};

    // clamped edge B1: even reflection enforcing w_[10] = 0
    for (int j = 0; j < N2; ++j) {
        b.rule(-1, j).t(1, j, 1.0);
        b.rule(-2, j).t(2, j, 1.0);
    }

    // actuated edges, moment condition M1 = 0:  w02 = -nu*w20
    // ghost = 2 w(i,e) - w(i,e') - nu (dz2^2/dz1^2)(w(i+1,e)-2w(i,e)+w(i-1,e))
    for (int i = 1; i <= N1 - 2; ++i) {
        b.rule(i, -1).t(i, 0, 2.0 + 2.0 * nu * r21).t(i, 1, -1.0).t(i + 1, 0, -nu * r21).t(i - 1, 0, -nu * r21);
        b.rule(i, N2).t(i, N2 - 1, 2.0 + 2.0 * nu * r21).t(i, N2 - 2, -1.0).t(i + 1, N2 - 1, -nu * r21).t(i - 1, N2 - 1, -nu * r21);
    }

    // free edge B3, moment condition M2 = 0:  w20 = -nu*w02
    for (int j = 1; j <= N2 - 2; ++j) {
        b.rule(N1, j).t(N1 - 1, j, 2.0 + 2.0 * nu * r12).t(N1 - 2, j, -1.0).t(N1 - 1, j + 1, -nu * r12).t(N1 - 1, j - 1, -nu * r12);
    }

    // free/actuated corner nodes: both moment conditions together force
    // w20 = w02 = 0 there (determinant 1 - nu^2 != 0)
    b.rule(N1, 0).t(N1 - 1, 0, 2.0).t(N1 - 2, 0, -1.0);
    b.rule(N1 - 1, -1).t(N1 - 1, 0, 2.0).t(N1 - 1, 1, -1.0);
    b.rule(N1, N2 - 1).t(N1 - 1, N2 - 1, 2.0).t(N1 - 2, N2 - 1, -1.0);
    b.rule(N1 - 1, N2).t(N1 - 1, N2 - 1, 2.0).t(N1 - 1, N2 - 2, -1.0);

    // clamped/actuated corner ghosts: average of the clamped-line
    // extrapolation and the actuated moment closure
    b.rule(0, -1).t(0, 0, 2.0 + nu * r21).t(0, 1, -1.0).t(1, 0, -0.5 * nu * r21).t(-1, 0, -0.5 * nu * r21);
    b.rule(0, N2).t(0, N2 - 1, 2.0 + nu * r21).t(0, N2 - 2, -1.0).t(1, N2 - 1, -0.5 * nu * r21).t(-1, N2 - 1, -0.5 * nu * r21);

    // free/actuated corner blocks: average of the two edge-wise extrapolations
    b.rule(N1, -1).t(N1, 0, 1.0).t(N1, 1, -0.5).t(N1 - 1, -1, 1.0).t(N1 - 2, -1, -0.5);
    b.rule(N1, N2).t(N1, N2 - 1, 1.0).t(N1, N2 - 2, -0.5).t(N1 - 1, N2, 1.0).t(N1 - 2, N2, -0.5);

    // free edge B3, shear condition Q2 = 0, i.e. w30 = -(2-nu) w12, with
    // w12 through the first ghost column:
    //   X(N1+1,j) = 2X(N1,j) - 2X(N1-2,j) + X(N1-3,j) - beta*[bracket]
    //   bracket = X(N1,j+1) - X(N1-2,j+1) - 2X(N1,j) + 2X(N1-2,j)
    //           + X(N1,j-1) - X(N1-2,j-1)
    {
        const double beta = (2.0 - nu) * g.dz1 * g.dz1 / (g.dz2 * g.dz2);
        for (int j = 0; j <= N2 - 1; ++j) {
            b.rule(N1 + 1, j)
                .t(N1, j, 2.0 + 2.0 * beta)
                .t(N1 - 2, j, -2.0 - 2.0 * beta)
                .t(N1 - 3, j, 1.0)
                .t(N1, j + 1, -beta)
                .t(N1 - 2, j + 1, beta)
                .t(N1, j - 1, -beta)
                .t(N1 - 2, j - 1, beta);
        }
    }

    // actuated edges, shear condition Q1 = q:  w03 + (2-nu) w21 = q / D_E
    // bottom:  X(i,-2) = X(i,2) - 2X(i,1) + 2X(i,-1)
    //                  + alpha*[bracket] - (2 dz2^3/D_E) q_b(i)
    // top:     X(i,N2+1) = 2X(i,N2) - 2X(i,N2-2) + X(i,N2-3)
    //                  - alpha*[bracket'] + (2 dz2^3/D_E) q_t(i)
    {
        const double alpha = (2.0 - nu) * g.dz2 * g.dz2 / (g.dz1 * g.dz1);
        const double qc = 2.0 * g.dz2 * g.dz2 * g.dz2 / p.D_E;
        for (int i = 1; i <= N1 - 1; ++i) {
            b.rule(i, -2)
                .t(i, 2, 1.0)
                .t(i, 1, -2.0 - 2.0 * alpha)
                .t(i, -1, 2.0 + 2.0 * alpha)
                .t(i + 1, 1, alpha)
                .t(i + 1, -1, -alpha)
                .t(i - 1, 1, alpha)
                .t(i - 1, -1, -alpha)
                .q(0, i, -qc);
            b.rule(i, N2 + 1)
                .t(i, N2 - 3, 1.0)
                .t(i, N2 - 2, -2.0 - 2.0 * alpha)
                .t(i, N2, 2.0 + 2.0 * alpha)
                .t(i + 1, N2 - 2, alpha)
                .t(i + 1, N2, -alpha)
                .t(i - 1, N2 - 2, alpha)
                .t(i - 1, N2, -alpha)
                .q(1, i, qc);
        }
    }

    // remaining caps so every extended entry is defined (linear extrapolation;
    // none of these feed the bending energy)
    b.rule(0, -2).t(0, -1, 2.0).t(0, 0, -1.0);
    b.rule(0, N2 + 1).t(0, N2, 2.0).t(0, N2 - 1, -1.0);
    b.rule(N1, -2).t(N1, -1, 2.0).t(N1, 0, -1.0);
    b.rule(N1, N2 + 1).t(N1, N2, 2.0).t(N1, N2 - 1, -1.0);
    b.rule(N1 + 1, -1).t(N1, -1, 2.0).t(N1 - 1, -1, -1.0);
    b.rule(N1 + 1, -2).t(N1, -2, 2.0).t(N1 - 1, -2, -1.0);
    b.rule(N1 + 1, N2).t(N1, N2, 2.0).t(N1 - 1, N2, -1.0);
    b.rule(N1 + 1, N2 + 1).t(N1, N2 + 1, 2.0).t(N1 - 1, N2 + 1, -1.0);
    for (int j : {-2, -1, N2, N2 + 1}) {
        b.rule(-1, j).t(1, j, 1.0);
        b.rule(-2, j).t(2, j, 1.0);
    }
}

void GhostClosure::build_simply_supported(const Grid& g) {
    const int N1 = g.N1, N2 = g.N2;
    RuleBuilder b{g, rules_, nullptr};
    // odd reflection through the edge value on all four edges
    for (int j = 0; j < N2; ++j) {
        for (int k : {1, 2}) {
            b.rule(-k, j).t(0, j, 2.0).t(k, j, -1.0);
            b.rule(N1 - 1 + k, j).t(N1 - 1, j, 2.0).t(N1 - 1 - k, j, -1.0);
        }
    }
    for (int i = -2; i < N1 + 2; ++i) {
        for (int k : {1, 2}) {
            b.rule(i, -k).t(i, 0, 2.0).t(i, k, -1.0);
            b.rule(i, N2 - 1 + k).t(i, N2 - 1, 2.0).t(i, N2 - 1 - k, -1.0);
        }
    }
}

void GhostClosure::apply(GhostField& x, const AppliedShear& q) const {
    const double* qv[2] = {q.bottom.data(), q.top.data()};
    for (const GhostRule& r : rules_) {
        double s = 0.0;
        for (const GhostTerm& t : r.terms) s += t.c * x[t.src];
        if (r.q_channel >= 0) s += r.q_coeff * qv[r.q_channel][r.q_index];
        x[r.target] = s;
    }
}

void GhostClosure::apply_homogeneous(GhostField& x) const {
    for (const GhostRule& r : rules_) {
        double s = 0.0;
        for (const GhostTerm& t : r.terms) s += t.c * x[t.src];
        x[r.target] = s;
    }
}

void GhostClosure::adjoint(GhostField& grad) const {
    for (auto it = rules_.rbegin(); it != rules_.rend(); ++it) {
        double v = grad[it->target];
        if (v == 0.0) continue;
        for (const GhostTerm& t : it->terms) grad[t.src] += t.c * v;
    }
}

GhostField extend_with_bc(const Field& w, const GhostClosure& closure, const AppliedShear& q) {
    const Grid& g = closure.grid();
    if ((int)q.bottom.size() != g.N1 || (int)q.top.size() != g.N1)
        throw std::invalid_argument("applied shear profiles must have N1 samples");
    GhostField x(g.N1, g.N2);
    x.set_interior(w);
    closure.apply(x, q);
    return x;
}

GhostField extend_with_bc(const Field& w, const GhostClosure& closure) {
    GhostField x(closure.grid().N1, closure.grid().N2);
    x.set_interior(w);
    closure.apply_homogeneous(x);
    return x;
}

} // namespace phplate
