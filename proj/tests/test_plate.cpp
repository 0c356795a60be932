#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "phplate/plate.hpp"

using namespace phplate;

namespace {
const double pi = 3.14159265358979323846;
}

TEST_CASE("hamiltonian density on elementary states") {
    Grid g(13, 13, 1.0, 1.0);
    PlateParams p;
    p.D_E = 1.0;
    p.rho_A = 2.0;
    PlateModel model(g, p, BoundaryConditions::plate_default());

    PlantState zero(g.N1, g.N2);
    Field h0 = model.hamiltonian_density(zero);
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) CHECK(h0(i, j) == 0.0);

    PlantState mom(g.N1, g.N2);
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) mom.p(i, j) = 0.5;
    Field hm = model.hamiltonian_density(mom);
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j)
            CHECK(hm(i, j) == doctest::Approx(0.25 / (2.0 * p.rho_A)).epsilon(1e-14));

    // w = z1^2 has only w20 = 2: density 0.5 * D_E * 4 = 2 in the interior
    PlantState bend(g.N1, g.N2);
    bend.w = sample([](double z1, double) { return z1 * z1; }, g);
    for (int j = 0; j < g.N2; ++j) bend.w(0, j) = 0.0;
    Field hb = model.hamiltonian_density(bend);
    for (int i = 2; i < g.N1 - 2; ++i)
        for (int j = 2; j < g.N2 - 2; ++j) CHECK(hb(i, j) == doctest::Approx(2.0).epsilon(1e-10));

    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) {
            CHECK(h0(i, j) >= 0.0);
            CHECK(hb(i, j) >= -1e-15);
        }
}

TEST_CASE("total energy: momentum plateau and analytic bending integral") {
    Grid g(41, 41, 1.0, 1.0);
    PlateParams p;
    p.nu = 0.2;
    PlateModel model(g, p, BoundaryConditions::plate_default());

    PlantState zero(g.N1, g.N2);
    CHECK(model.total_energy(zero) == 0.0);

    PlantState mom(g.N1, g.N2);
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) mom.p(i, j) = 1.0;
    CHECK(model.total_energy(mom) == doctest::Approx(0.5).epsilon(1e-13));

    // sin-sin bending energy against the closed-form integral pi^4/2
    // (under the simply supported layout, which matches the mode)
    PlateModel ss(g, p, BoundaryConditions::simply_supported());
    PlantState s(g.N1, g.N2);
    s.w = sample([](double z1, double z2) { return std::sin(pi * z1) * std::sin(pi * z2); }, g);
    double V = ss.total_energy(s);
    double Vref = 0.5 * pi * pi * pi * pi;
    CHECK(std::abs(V - Vref) / Vref < 0.01);

    Grid g2(81, 81, 1.0, 1.0);
    PlateModel ss2(g2, p, BoundaryConditions::simply_supported());
    PlantState s2(g2.N1, g2.N2);
    s2.w = sample([](double z1, double z2) { return std::sin(pi * z1) * std::sin(pi * z2); }, g2);
    double V2 = ss2.total_energy(s2);
    CHECK(std::abs(V2 - Vref) < 0.35 * std::abs(V - Vref));

    PlantState sneg = s;
    sneg.w *= -1.0;
    sneg.p *= -1.0;
    CHECK(ss.total_energy(sneg) == doctest::Approx(V).epsilon(1e-14));
}

TEST_CASE("plant rhs: momentum advection and quartic probe") {
    Grid g(17, 17, 1.0, 1.0);
    PlateParams p;
    p.rho_A = 2.5;
    PlateModel model(g, p, BoundaryConditions::plate_default());

    PlantState s(g.N1, g.N2), ds;
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) s.p(i, j) = model.pinned(i, j) ? 0.0 : 0.8;
    model.rhs(s, EdgeLoads::zero(g.N1), ds);
    for (int i = 1; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) {
            CHECK(ds.w(i, j) == doctest::Approx(0.8 / p.rho_A).epsilon(1e-14));
            CHECK(ds.p(i, j) == 0.0);
        }

    PlantState q(g.N1, g.N2), dq;
    q.w = sample([](double z1, double) { return z1 * z1 * z1 * z1; }, g);
    for (int j = 0; j < g.N2; ++j) q.w(0, j) = 0.0;
    model.rhs(q, EdgeLoads::zero(g.N1), dq);
    for (int i = 4; i < g.N1 - 4; ++i)
        for (int j = 4; j < g.N2 - 4; ++j)
            CHECK(dq.p(i, j) == doctest::Approx(-24.0 * p.D_E).epsilon(1e-9));
}

TEST_CASE("plant rhs is linear in state and inputs") {
    Grid g(13, 13, 1.0, 1.0);
    PlateParams p;
    PlateModel model(g, p, BoundaryConditions::plate_default());
    auto mk = [&](unsigned seed) {
        PlantState s(g.N1, g.N2);
        std::srand(seed);
        for (int i = 1; i < g.N1; ++i)
            for (int j = 0; j < g.N2; ++j) {
                s.w(i, j) = (double)std::rand() / RAND_MAX - 0.5;
                s.p(i, j) = (double)std::rand() / RAND_MAX - 0.5;
            }
        return s;
    };
    PlantState a = mk(1), b = mk(2), ab(g.N1, g.N2);
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) {
            ab.w(i, j) = 2.0 * a.w(i, j) + 3.0 * b.w(i, j);
            ab.p(i, j) = 2.0 * a.p(i, j) + 3.0 * b.p(i, j);
        }
    EdgeLoads la = EdgeLoads::zero(g.N1), lb = EdgeLoads::zero(g.N1), lab = EdgeLoads::zero(g.N1);
    for (int i = 0; i < g.N1; ++i) {
        la.bottom[(size_t)i] = std::sin(1.0 + i);
        lb.top[(size_t)i] = std::cos(2.0 + i);
        lab.bottom[(size_t)i] = 2.0 * la.bottom[(size_t)i];
        lab.top[(size_t)i] = 3.0 * lb.top[(size_t)i];
    }
    PlantState da, db, dab;
    model.rhs(a, la, da);
    model.rhs(b, lb, db);
    model.rhs(ab, lab, dab);
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) {
            CHECK(dab.w(i, j) ==
                  doctest::Approx(2 * da.w(i, j) + 3 * db.w(i, j)).epsilon(1e-11).scale(1.0));
            CHECK(dab.p(i, j) ==
                  doctest::Approx(2 * da.p(i, j) + 3 * db.p(i, j)).epsilon(1e-11).scale(1e3));
        }
}

TEST_CASE("boundary quantity formulas on polynomial probes") {
    Grid g(13, 13, 1.0, 1.0);
    PlateParams p;
    p.nu = 0.2;
    PlateModel model(g, p, BoundaryConditions::plate_default());

    auto cubic = sample_extended([](double, double z2) { return z2 * z2 * z2; }, g);
    BoundaryQuantities b1 = model.boundary_quantities(cubic);
    for (int i = 0; i < g.N1; ++i) {
        CHECK(b1.Q1_bottom[i] == doctest::Approx(6.0).epsilon(1e-11));
        CHECK(b1.Q1_top[i] == doctest::Approx(6.0).epsilon(1e-11));
    }

    auto para = sample_extended([](double z1, double) { return z1 * z1; }, g);
    BoundaryQuantities b2 = model.boundary_quantities(para);
    for (int i = 0; i < g.N1; ++i) {
        CHECK(b2.M1_bottom[i] == doctest::Approx(-0.4).epsilon(1e-11));
        CHECK(b2.M1_top[i] == doctest::Approx(-0.4).epsilon(1e-11));
    }
    for (int j = 0; j < g.N2; ++j) {
        CHECK(b2.M2_left[j] == doctest::Approx(2.0).epsilon(1e-11));
        CHECK(b2.M2_right[j] == doctest::Approx(2.0).epsilon(1e-11));
    }

    Field zero(g.N1, g.N2, 0.0);
    BoundaryQuantities b0 = model.boundary_quantities(zero, AppliedShear::zero(g.N1));
    for (int i = 0; i < g.N1; ++i) {
        CHECK(b0.Q1_bottom[i] == 0.0);
        CHECK(b0.M1_top[i] == 0.0);
    }

    auto comb = sample_extended([](double z1, double z2) { return z2 * z2 * z2 + 2.0 * z1 * z1; }, g);
    BoundaryQuantities bc = model.boundary_quantities(comb);
    for (int i = 0; i < g.N1; ++i)
        CHECK(bc.M1_bottom[i] ==
              doctest::Approx(b1.M1_bottom[i] + 2.0 * b2.M1_bottom[i]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("power balance residual bookkeeping") {
    std::vector<double> H = {1.0, 1.1, 1.2, 1.3};
    std::vector<double> P = {1.0, 1.0, 1.0, 1.0};
    auto r = power_balance_residual(H, P, 0.1);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(r[1] == doctest::Approx(0.0).scale(1.0));

    std::vector<double> z = {0.0, 0.0, 0.0};
    auto rz = power_balance_residual(z, z, 0.1);
    CHECK(rz[0] == 0.0);

    std::vector<double> tooShort = {1.0, 2.0};
    CHECK_THROWS_AS(power_balance_residual(tooShort, tooShort, 0.1), std::invalid_argument);
}

TEST_CASE("closed ports: semi-discrete energy rate vanishes identically") {
    Grid g(17, 17, 1.0, 1.0);
    PlateParams p;
    PlateModel model(g, p, BoundaryConditions::plate_default());
    PlantState s(g.N1, g.N2), ds;
    s.w = sample([](double z1, double z2) { return 0.2 * z1 * z1 * (1.0 + 0.3 * std::sin(2 * z2)); }, g);
    s.p = sample([](double z1, double z2) { return 0.5 * z1 * z1 * std::cos(z2); }, g);
    for (int j = 0; j < g.N2; ++j) s.w(0, j) = s.p(0, j) = 0.0;
    model.rhs(s, EdgeLoads::zero(g.N1), ds);
    double rate = 0.0;
    Field f = kernels::bending_force(s.w, model.closure(), p);
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) {
            double m = g.nodew(i, j) * g.dz1 * g.dz2;
            rate += -m * f(i, j) * ds.w(i, j) + m * s.p(i, j) / p.rho_A * ds.p(i, j);
        }
    CHECK(std::abs(rate) < 1e-10);
}
