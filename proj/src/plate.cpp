#include "phplate/plate.hpp"

#include <stdexcept>

namespace phplate {

PlateModel::PlateModel(const Grid& g, const PlateParams& p, const BoundaryConditions& bc)
    : grid_(g), par_(p), bc_(bc), closure_(grid_, par_, bc_) {
    par_.validate();
}

bool PlateModel::pinned(int i, int j) const {
    if (bc_.is_simply_supported())
        return i == 0 || i == grid_.N1 - 1 || j == 0 || j == grid_.N2 - 1;
    return i == 0; // clamped edge B1
}

Field PlateModel::hamiltonian_density(const PlantState& s) const {
    GhostField x = extend_with_bc(s.w, closure_);
    Field a = partial(x, {2, 0}, grid_);
    Field b = partial(x, {0, 2}, grid_);
    Field c = partial(x, {1, 1}, grid_);
    Field h(grid_.N1, grid_.N2);
    for (int i = 0; i < grid_.N1; ++i) {
        for (int j = 0; j < grid_.N2; ++j) {
            double kin = s.p(i, j) * s.p(i, j) / (2.0 * par_.rho_A);
            double bend = 0.5 * par_.D_E *
                          (a(i, j) * a(i, j) + b(i, j) * b(i, j) +
                           2.0 * par_.nu * a(i, j) * b(i, j) +
                           2.0 * (1.0 - par_.nu) * c(i, j) * c(i, j));
            h(i, j) = kin + bend;
        }
    }
    return h;
}

double PlateModel::total_energy(const PlantState& s) const {
    return kernels::kinetic_energy(s.p, grid_, par_) +
           kernels::bending_energy(s.w, closure_, par_);
}

double PlateModel::potential_energy(const Field& w) const {
    return kernels::bending_energy(w, closure_, par_);
}

void PlateModel::rhs(const PlantState& s, const EdgeLoads& loads, PlantState& out) const {
    const int N1 = grid_.N1, N2 = grid_.N2;
    if ((int)loads.bottom.size() != N1 || (int)loads.top.size() != N1)
        throw std::invalid_argument("edge loads must have N1 samples");
    out.w = s.p;
    out.w *= 1.0 / par_.rho_A;
    out.p = kernels::bending_force(s.w, closure_, par_);
    const double lc = 2.0 / grid_.dz2; // lumped edge-row weight
    for (int i = 0; i < N1; ++i) {
        out.p(i, 0) += lc * loads.bottom[(size_t)i];
        out.p(i, N2 - 1) += lc * loads.top[(size_t)i];
    }
    for (int i = 0; i < N1; ++i)
        for (int j = 0; j < N2; ++j)
            if (pinned(i, j)) {
                out.w(i, j) = 0.0;
                out.p(i, j) = 0.0;
            }
}

BoundaryQuantities PlateModel::boundary_quantities(const GhostField& x) const {
    const Grid& g = grid_;
    const double DE = par_.D_E, nu = par_.nu;
    Field w20 = partial(x, {2, 0}, g);
    Field w02 = partial(x, {0, 2}, g);
    Field w30 = partial(x, {3, 0}, g);
    Field w03 = partial(x, {0, 3}, g);
    Field w21 = partial(x, {2, 1}, g);
    Field w12 = partial(x, {1, 2}, g);

    BoundaryQuantities bq;
    bq.Q1_bottom = EdgeProfile(Edge::B2, g.N1);
    bq.M1_bottom = EdgeProfile(Edge::B2, g.N1);
    bq.Q1_top = EdgeProfile(Edge::B4, g.N1);
    bq.M1_top = EdgeProfile(Edge::B4, g.N1);
    bq.Q2_left = EdgeProfile(Edge::B1, g.N2);
    bq.M2_left = EdgeProfile(Edge::B1, g.N2);
    bq.Q2_right = EdgeProfile(Edge::B3, g.N2);
    bq.M2_right = EdgeProfile(Edge::B3, g.N2);

    for (int i = 0; i < g.N1; ++i) {
        bq.Q1_bottom[i] = DE * (w03(i, 0) + (2.0 - nu) * w21(i, 0));
        bq.M1_bottom[i] = -DE * (w02(i, 0) + nu * w20(i, 0));
        bq.Q1_top[i] = DE * (w03(i, g.N2 - 1) + (2.0 - nu) * w21(i, g.N2 - 1));
        bq.M1_top[i] = -DE * (w02(i, g.N2 - 1) + nu * w20(i, g.N2 - 1));
    }
    for (int j = 0; j < g.N2; ++j) {
        bq.Q2_left[j] = -DE * (w30(0, j) + (2.0 - nu) * w12(0, j));
        bq.M2_left[j] = DE * (w20(0, j) + nu * w02(0, j));
        bq.Q2_right[j] = -DE * (w30(g.N1 - 1, j) + (2.0 - nu) * w12(g.N1 - 1, j));
        bq.M2_right[j] = DE * (w20(g.N1 - 1, j) + nu * w02(g.N1 - 1, j));
    }
    return bq;
}

BoundaryQuantities PlateModel::boundary_quantities(const Field& w, const AppliedShear& q) const {
    return boundary_quantities(extend_with_bc(w, closure_, q));
}

namespace {

// one-sided derivative at the edge from samples marching inward
// (spacing h, sample 0 on the edge); second-order accurate
inline double oneside_d1(const double* f, double h) {
    return (-1.5 * f[0] + 2.0 * f[1] - 0.5 * f[2]) / h;
}
inline double oneside_d2(const double* f, double h) {
    return (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
}
inline double oneside_d3(const double* f, double h) {
    return (-2.5 * f[0] + 9.0 * f[1] - 12.0 * f[2] + 7.0 * f[3] - 1.5 * f[4]) / (h * h * h);
}

} // namespace

void PlateModel::measured_actuated_quantities(const Field& w, EdgeProfile& Q1b, EdgeProfile& M1b,
                                              EdgeProfile& Q1t, EdgeProfile& M1t) const {
    const Grid& g = grid_;
    const int N1 = g.N1, N2 = g.N2;
    const double DE = par_.D_E, nu = par_.nu;
    Q1b = EdgeProfile(Edge::B2, N1);
    M1b = EdgeProfile(Edge::B2, N1);
    Q1t = EdgeProfile(Edge::B4, N1);
    M1t = EdgeProfile(Edge::B4, N1);

    // inward-sample buffers per column, bottom then top
    auto col = [&](int i, int j0, int dir, double* buf, int n) {
        for (int k = 0; k < n; ++k) buf[k] = w(i, j0 + dir * k);
    };
    std::vector<double> d1b((size_t)N1), d1t((size_t)N1); // w01 traces
    double buf[5];
    for (int i = 0; i < N1; ++i) {
        col(i, 0, +1, buf, 5);
        double w02b = oneside_d2(buf, g.dz2);
        double w03b = oneside_d3(buf, g.dz2);
        d1b[(size_t)i] = oneside_d1(buf, g.dz2);
        col(i, N2 - 1, -1, buf, 5);
        // odd derivatives flip sign when sampled inward from the upper edge
        double w02t = oneside_d2(buf, g.dz2);
        double w03t = -oneside_d3(buf, g.dz2);
        d1t[(size_t)i] = -oneside_d1(buf, g.dz2);

        // tangential curvature along the edge rows
        double w20b, w20t;
        if (i == 0) {
            double rb[4] = {w(0, 0), w(1, 0), w(2, 0), w(3, 0)};
            double rt[4] = {w(0, N2 - 1), w(1, N2 - 1), w(2, N2 - 1), w(3, N2 - 1)};
            w20b = oneside_d2(rb, g.dz1);
            w20t = oneside_d2(rt, g.dz1);
        } else if (i == N1 - 1) {
            double rb[4] = {w(N1 - 1, 0), w(N1 - 2, 0), w(N1 - 3, 0), w(N1 - 4, 0)};
            double rt[4] = {w(N1 - 1, N2 - 1), w(N1 - 2, N2 - 1), w(N1 - 3, N2 - 1), w(N1 - 4, N2 - 1)};
            w20b = oneside_d2(rb, g.dz1);
            w20t = oneside_d2(rt, g.dz1);
        } else {
            w20b = (w(i + 1, 0) - 2.0 * w(i, 0) + w(i - 1, 0)) / (g.dz1 * g.dz1);
            w20t = (w(i + 1, N2 - 1) - 2.0 * w(i, N2 - 1) + w(i - 1, N2 - 1)) / (g.dz1 * g.dz1);
        }
        M1b[i] = -DE * (w02b + nu * w20b);
        M1t[i] = -DE * (w02t + nu * w20t);
        Q1b[i] = DE * w03b; // w21 term added below from the d1 traces
        Q1t[i] = DE * w03t;
    }
    auto d2_along = [&](const std::vector<double>& f, int i) {
        if (i == 0) {
            double r[4] = {f[0], f[1], f[2], f[3]};
            return oneside_d2(r, g.dz1);
        }
        if (i == N1 - 1) {
            double r[4] = {f[(size_t)N1 - 1], f[(size_t)N1 - 2], f[(size_t)N1 - 3], f[(size_t)N1 - 4]};
            return oneside_d2(r, g.dz1);
        }
        return (f[(size_t)i + 1] - 2.0 * f[(size_t)i] + f[(size_t)i - 1]) / (g.dz1 * g.dz1);
    };
    for (int i = 0; i < N1; ++i) {
        Q1b[i] += DE * (2.0 - nu) * d2_along(d1b, i);
        Q1t[i] += DE * (2.0 - nu) * d2_along(d1t, i);
    }
}

double PlateModel::port_power(const PlantState& s) const {
    const Grid& g = grid_;
    const int N1 = g.N1, N2 = g.N2;
    EdgeProfile Q1b, M1b, Q1t, M1t;
    measured_actuated_quantities(s.w, Q1b, M1b, Q1t, M1t);

    // velocity and its z2-derivative traces from the momentum field
    double buf[5];
    EdgeProfile vb(Edge::B2, N1), vt(Edge::B4, N1), vpb(Edge::B2, N1), vpt(Edge::B4, N1);
    for (int i = 0; i < N1; ++i) {
        vb[i] = s.p(i, 0) / par_.rho_A;
        vt[i] = s.p(i, N2 - 1) / par_.rho_A;
        for (int k = 0; k < 3; ++k) buf[k] = s.p(i, k) / par_.rho_A;
        vpb[i] = oneside_d1(buf, g.dz2);
        for (int k = 0; k < 3; ++k) buf[k] = s.p(i, N2 - 1 - k) / par_.rho_A;
        vpt[i] = -oneside_d1(buf, g.dz2);
    }
    EdgeProfile ib(Edge::B2, N1), it(Edge::B4, N1);
    for (int i = 0; i < N1; ++i) {
        ib[i] = Q1b[i] * vb[i] + M1b[i] * vpb[i];
        it[i] = Q1t[i] * vt[i] + M1t[i] * vpt[i];
    }
    // clamped edge carries no power (v = v' = 0); the free edge satisfies
    // Q2 = M2 = 0 through the ghost closure, so only the actuated edges count
    return edge_orientation(Edge::B2) * integrate_edge(ib, g) +
           edge_orientation(Edge::B4) * integrate_edge(it, g);
}

std::vector<double> power_balance_residual(const std::vector<double>& H,
                                           const std::vector<double>& port, double dt) {
    if (H.size() < 3 || port.size() != H.size())
        throw std::invalid_argument("power-balance residual needs at least 3 matching samples");
    std::vector<double> r(H.size() - 2, 0.0);
    for (size_t k = 1; k + 1 < H.size(); ++k) {
        double dH = (H[k + 1] - H[k - 1]) / (2.0 * dt);
        double P = 0.25 * (port[k - 1] + 2.0 * port[k] + port[k + 1]);
        r[k - 1] = dH - P;
    }
    return r;
}

} // namespace phplate
