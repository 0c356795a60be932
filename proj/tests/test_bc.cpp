#include <doctest.h>

#include <cmath>

#include "phplate/bc.hpp"
#include "phplate/plate.hpp"

using namespace phplate;

namespace {
GhostClosure make_closure(const Grid& g, const PlateParams& p) {
    return GhostClosure(g, p, BoundaryConditions::plate_default());
}
} // namespace

TEST_CASE("zero field extends to zero ghosts") {
    Grid g(13, 13, 1.0, 1.0);
    PlateParams p;
    auto cl = make_closure(g, p);
    Field w(g.N1, g.N2, 0.0);
    GhostField x = extend_with_bc(w, cl, AppliedShear::zero(g.N1));
    for (int i = -2; i < g.N1 + 2; ++i)
        for (int j = -2; j < g.N2 + 2; ++j) CHECK(x(i, j) == 0.0);
}

TEST_CASE("clamped edge reflects symmetrically") {
    Grid g(13, 13, 1.0, 1.0);
    PlateParams p;
    auto cl = make_closure(g, p);
    Field w(g.N1, g.N2, 0.0);
    const double c = 0.7;
    for (int j = 0; j < g.N2; ++j) w(1, j) = c; // row adjacent to the clamped edge
    GhostField x = extend_with_bc(w, cl, AppliedShear::zero(g.N1));
    for (int j = 1; j < g.N2 - 1; ++j) {
        CHECK(x(-1, j) == doctest::Approx(c)); // mirror enforces w_[10] = 0
        CHECK(x(0, j) == 0.0);                 // edge stays pinned
    }
}

TEST_CASE("free edge ghosts satisfy both boundary relations") {
    // deflection (z1)^2 violates the free conditions, so the ghost solve has
    // to produce nonzero corrections; substituting back must annihilate
    // M2 and Q2 on the free edge
    Grid g(13, 13, 1.0, 1.0);
    PlateParams p;
    p.nu = 0.2;
    PlateModel model(g, p, BoundaryConditions::plate_default());
    Field w = sample([](double z1, double) { return z1 * z1; }, g);
    for (int j = 0; j < g.N2; ++j) w(0, j) = 0.0;
    GhostField x = extend_with_bc(w, model.closure(), AppliedShear::zero(g.N1));
    BoundaryQuantities bq = model.boundary_quantities(x);
    for (int j = 0; j < g.N2; ++j) {
        CHECK(std::abs(bq.M2_right[j]) <= 1e-10 * p.D_E);
        CHECK(std::abs(bq.Q2_right[j]) <= 1e-10 * p.D_E);
    }
}

TEST_CASE("actuated edge reproduces the prescribed shear") {
    Grid g(13, 13, 1.0, 1.0);
    PlateParams p;
    PlateModel model(g, p, BoundaryConditions::plate_default());
    Field w = sample([](double z1, double z2) { return 0.1 * z1 * z1 * (1.0 + 0.5 * z2); }, g);
    for (int j = 0; j < g.N2; ++j) w(0, j) = 0.0;
    AppliedShear q = AppliedShear::zero(g.N1);
    for (int i = 0; i < g.N1; ++i) {
        q.bottom[(size_t)i] = 0.3 * std::sin(2.0 * g.z1(i));
        q.top[(size_t)i] = -0.1 + 0.2 * g.z1(i);
    }
    BoundaryQuantities bq = model.boundary_quantities(w, q);
    for (int i = 1; i < g.N1 - 1; ++i) {
        CHECK(bq.Q1_bottom[i] == doctest::Approx(q.bottom[(size_t)i]).epsilon(1e-9).scale(1.0));
        CHECK(bq.Q1_top[i] == doctest::Approx(q.top[(size_t)i]).epsilon(1e-9).scale(1.0));
        CHECK(std::abs(bq.M1_bottom[i]) <= 1e-10);
        CHECK(std::abs(bq.M1_top[i]) <= 1e-10);
    }
}

TEST_CASE("unsupported bc layouts are rejected") {
    BoundaryConditions bc;
    bc.kind[(size_t)Edge::B1] = BoundaryKind::Free;
    CHECK_THROWS_AS(bc.validate(), std::invalid_argument);
    CHECK_NOTHROW(BoundaryConditions::plate_default().validate());
    CHECK_NOTHROW(BoundaryConditions::simply_supported().validate());
}

TEST_CASE("ghost fill is deterministic and finite at the corners") {
    Grid g(13, 13, 1.0, 1.0);
    PlateParams p;
    auto cl = make_closure(g, p);
    Field w = sample([](double z1, double z2) { return std::sin(z1) * std::cos(2 * z2) * z1 * z1; }, g);
    for (int j = 0; j < g.N2; ++j) w(0, j) = 0.0;
    GhostField x1 = extend_with_bc(w, cl, AppliedShear::zero(g.N1));
    GhostField x2 = extend_with_bc(w, cl, AppliedShear::zero(g.N1));
    for (int i = -2; i < g.N1 + 2; ++i)
        for (int j = -2; j < g.N2 + 2; ++j) {
            CHECK(std::isfinite(x1(i, j)));
            CHECK(x1(i, j) == x2(i, j));
        }
}
