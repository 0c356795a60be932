#include "phplate/kernels.hpp"

#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace phplate::kernels {

namespace {
Backend g_backend = Backend::Serial;
int g_thread_cap = 0;

inline int threads_for(Backend be) {
#ifdef _OPENMP
    if (be == Backend::OpenMP) {
        int t = omp_get_max_threads();
        if (g_thread_cap > 0) t = std::min(t, g_thread_cap);
        return std::max(1, t);
    }
#else
    (void)be;
#endif
    return 1;
}
} // namespace

Backend default_backend() { return g_backend; }
void set_default_backend(Backend b) { g_backend = b; }
void set_thread_cap(int threads) { g_thread_cap = threads; }
int thread_cap() { return g_thread_cap; }

BendingJets bending_jets(const GhostField& x, const Grid& g, Backend be) {
    BendingJets out;
    out.w20 = Field(g.N1, g.N2);
    out.w02 = Field(g.N1, g.N2);
    out.twist = Field(g.N1 - 1, g.N2 - 1);
    const double i1 = 1.0 / (g.dz1 * g.dz1), i2 = 1.0 / (g.dz2 * g.dz2);
    const double ic = 1.0 / (g.dz1 * g.dz2);
    const int nt = threads_for(be);

#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
    for (int i = 0; i < g.N1; ++i) {
        for (int j = 0; j < g.N2; ++j) {
            const double w = x(i, j);
            out.w20(i, j) = (x(i + 1, j) - 2.0 * w + x(i - 1, j)) * i1;
            out.w02(i, j) = (x(i, j + 1) - 2.0 * w + x(i, j - 1)) * i2;
        }
    }
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
    for (int i = 0; i < g.N1 - 1; ++i) {
        for (int j = 0; j < g.N2 - 1; ++j) {
            out.twist(i, j) = (x(i + 1, j + 1) - x(i + 1, j) - x(i, j + 1) + x(i, j)) * ic;
        }
    }
    return out;
}

namespace {

/// row-blocked deterministic sum: every backend accumulates per-row partial
/// sums in index order, then combines rows in index order
double row_block_sum(int rows, int /*cols*/, const std::vector<double>& rowsum) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += rowsum[(size_t)i];
    return s;
}

} // namespace

double weighted_sum(const Field& f, const Grid& g, Backend be) {
    std::vector<double> rowsum((size_t)g.N1, 0.0);
    const int nt = threads_for(be);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
    for (int i = 0; i < g.N1; ++i) {
        double s = 0.0;
        for (int j = 0; j < g.N2; ++j) s += Grid::trapw(j, g.N2) * f(i, j);
        rowsum[(size_t)i] = Grid::trapw(i, g.N1) * s;
    }
    return row_block_sum(g.N1, g.N2, rowsum) * g.dz1 * g.dz2;
}

double bending_energy(const Field& w, const GhostClosure& closure, const PlateParams& p, Backend be) {
    const Grid& g = closure.grid();
    GhostField x = extend_with_bc(w, closure);
    BendingJets jets = bending_jets(x, g, be);
    const int nt = threads_for(be);

    std::vector<double> rowsum((size_t)g.N1, 0.0);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
    for (int i = 0; i < g.N1; ++i) {
        double s = 0.0;
        for (int j = 0; j < g.N2; ++j) {
            const double a = jets.w20(i, j), b = jets.w02(i, j);
            s += Grid::trapw(j, g.N2) * (a * a + b * b + 2.0 * p.nu * a * b);
        }
        rowsum[(size_t)i] = Grid::trapw(i, g.N1) * s;
    }
    double node_part = row_block_sum(g.N1, g.N2, rowsum);

    std::vector<double> cellsum((size_t)(g.N1 - 1), 0.0);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
    for (int i = 0; i < g.N1 - 1; ++i) {
        double s = 0.0;
        for (int j = 0; j < g.N2 - 1; ++j) s += jets.twist(i, j) * jets.twist(i, j);
        cellsum[(size_t)i] = s;
    }
    double cell_part = row_block_sum(g.N1 - 1, g.N2 - 1, cellsum);

    return 0.5 * p.D_E * (node_part + 2.0 * (1.0 - p.nu) * cell_part) * g.dz1 * g.dz2;
}

Field bending_force(const Field& w, const GhostClosure& closure, const PlateParams& p, Backend be) {
    const Grid& g = closure.grid();
    const int N1 = g.N1, N2 = g.N2;
    GhostField x = extend_with_bc(w, closure);
    BendingJets jets = bending_jets(x, g, be);
    const int nt = threads_for(be);

    // weighted curvature moments at the nodes
    Field m(N1, N2), n(N1, N2);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
    for (int i = 0; i < N1; ++i) {
        for (int j = 0; j < N2; ++j) {
            const double tw = g.nodew(i, j);
            const double a = jets.w20(i, j), b = jets.w02(i, j);
            m(i, j) = tw * (a + p.nu * b);
            n(i, j) = tw * (b + p.nu * a);
        }
    }

    // gather the adjoint of the jet stencils onto the extended grid
    GhostField grad(N1, N2);
    const double i1 = 1.0 / (g.dz1 * g.dz1), i2 = 1.0 / (g.dz2 * g.dz2);
    const double ic = 1.0 / (g.dz1 * g.dz2);
    const double tf = 2.0 * (1.0 - p.nu);
    auto mval = [&](int i, int j) { return (i >= 0 && i < N1 && j >= 0 && j < N2) ? m(i, j) : 0.0; };
    auto nval = [&](int i, int j) { return (i >= 0 && i < N1 && j >= 0 && j < N2) ? n(i, j) : 0.0; };
    auto cval = [&](int i, int j) {
        return (i >= 0 && i < N1 - 1 && j >= 0 && j < N2 - 1) ? jets.twist(i, j) : 0.0;
    };
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
    for (int i = -1; i < N1 + 1; ++i) {
        for (int j = -1; j < N2 + 1; ++j) {
            double s = (mval(i - 1, j) - 2.0 * mval(i, j) + mval(i + 1, j)) * i1 +
                       (nval(i, j - 1) - 2.0 * nval(i, j) + nval(i, j + 1)) * i2;
            s += tf * (cval(i - 1, j - 1) - cval(i - 1, j) - cval(i, j - 1) + cval(i, j)) * ic;
            grad(i, j) = s;
        }
    }

    // fold ghost contributions back through the closure, then scale
    closure.adjoint(grad);
    Field f(N1, N2);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
    for (int i = 0; i < N1; ++i)
        for (int j = 0; j < N2; ++j) f(i, j) = -p.D_E * grad(i, j) / g.nodew(i, j);
    return f;
}

double kinetic_energy(const Field& p, const Grid& g, const PlateParams& par, Backend be) {
    std::vector<double> rowsum((size_t)g.N1, 0.0);
    const int nt = threads_for(be);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1)
    for (int i = 0; i < g.N1; ++i) {
        double s = 0.0;
        for (int j = 0; j < g.N2; ++j) s += Grid::trapw(j, g.N2) * p(i, j) * p(i, j);
        rowsum[(size_t)i] = Grid::trapw(i, g.N1) * s;
    }
    return row_block_sum(g.N1, g.N2, rowsum) * g.dz1 * g.dz2 / (2.0 * par.rho_A);
}

} // namespace phplate::kernels
