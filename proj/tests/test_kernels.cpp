#include <doctest.h>

#include <cmath>
#include <random>

#include "phplate/kernels.hpp"

using namespace phplate;
using kernels::Backend;

namespace {

Field random_active_field(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    Field f(g.N1, g.N2);
    for (int i = 1; i < g.N1; ++i) // clamped edge stays zero
        for (int j = 0; j < g.N2; ++j) f(i, j) = d(rng);
    return f;
}

double mass(const Grid& g, int i, int j) { return g.nodew(i, j) * g.dz1 * g.dz2; }

} // namespace

TEST_CASE("bending force is the exact gradient of the bending energy") {
    Grid g(13, 13, 1.0, 1.0);
    PlateParams p;
    p.nu = 0.3;
    GhostClosure cl(g, p, BoundaryConditions::plate_default());

    Field w = random_active_field(g, 1);
    Field u = random_active_field(g, 2);
    // quadratic form identity: V(w+u) - V(w-u) = 2 <grad V(w), u>
    Field wp = w, wm = w;
    wp += u;
    wm -= u;
    double lhs = kernels::bending_energy(wp, cl, p) - kernels::bending_energy(wm, cl, p);
    Field f = kernels::bending_force(w, cl, p);
    double rhs = 0.0;
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) rhs += -mass(g, i, j) * f(i, j) * u(i, j);
    CHECK(lhs == doctest::Approx(2.0 * rhs).epsilon(1e-11));
}

TEST_CASE("bending force matches the 13-point biharmonic away from edges") {
    Grid g(17, 17, 1.0, 1.0);
    PlateParams p;
    p.nu = 0.2;
    p.D_E = 1.7;
    GhostClosure cl(g, p, BoundaryConditions::plate_default());
    Field w = sample([](double z1, double) { return z1 * z1 * z1 * z1; }, g);
    for (int j = 0; j < g.N2; ++j) w(0, j) = 0.0;
    Field f = kernels::bending_force(w, cl, p);
    for (int i = 4; i < g.N1 - 4; ++i)
        for (int j = 4; j < g.N2 - 4; ++j)
            CHECK(f(i, j) == doctest::Approx(-24.0 * p.D_E).epsilon(1e-9));

    Field w2 = sample([](double z1, double z2) { return z1 * z1 * z2 * z2; }, g);
    for (int j = 0; j < g.N2; ++j) w2(0, j) = 0.0;
    Field f2 = kernels::bending_force(w2, cl, p);
    for (int i = 4; i < g.N1 - 4; ++i)
        for (int j = 4; j < g.N2 - 4; ++j)
            CHECK(f2(i, j) == doctest::Approx(-8.0 * p.D_E).epsilon(1e-9));
}

TEST_CASE("OpenMP kernels reproduce the serial reference bitwise") {
    Grid g(21, 17, 1.0, 1.0);
    PlateParams p;
    GhostClosure cl(g, p, BoundaryConditions::plate_default());
    Field w = random_active_field(g, 7);

    Field fs = kernels::bending_force(w, cl, p, Backend::Serial);
    Field fo = kernels::bending_force(w, cl, p, Backend::OpenMP);
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) CHECK(fs(i, j) == fo(i, j));

    CHECK(kernels::bending_energy(w, cl, p, Backend::Serial) ==
          kernels::bending_energy(w, cl, p, Backend::OpenMP));
    CHECK(kernels::kinetic_energy(w, g, p, Backend::Serial) ==
          kernels::kinetic_energy(w, g, p, Backend::OpenMP));
    GhostField x = extend_with_bc(w, cl);
    auto js = kernels::bending_jets(x, g, Backend::Serial);
    auto jo = kernels::bending_jets(x, g, Backend::OpenMP);
    for (int i = 0; i < g.N1 - 1; ++i)
        for (int j = 0; j < g.N2 - 1; ++j) CHECK(js.twist(i, j) == jo.twist(i, j));
}
