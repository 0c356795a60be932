#include <doctest.h>

#include <cmath>

#include "phplate/observer.hpp"
#include "phplate/config.hpp"

using namespace phplate;

TEST_CASE("correction terms follow the gain formulas") {
    Grid g(13, 13, 1.0, 1.0);
    ObserverParams op;
    int im = ObserverParams::measurement_node(g);
    CHECK(im == 9);

    ObserverState s(g.N1, g.N2);
    Measurements m; // all zero
    Vec2 k0 = correction_terms(m, s, op, g, 1.0);
    CHECK(k0[0] == 0.0);
    CHECK(k0[1] == 0.0);

    // pure deflection error e on channel 1
    m.ybar1 = 1e-3;
    Vec2 k1 = correction_terms(m, s, op, g, 1.0);
    CHECK(k1[0] == doctest::Approx(-2.0));
    CHECK(k1[1] == 0.0);

    // pure velocity error v on channel 2
    Measurements mv;
    mv.y2 = 2e-3;
    Vec2 k2 = correction_terms(mv, s, op, g, 1.0);
    CHECK(k2[1] == doctest::Approx(-4.0));
    CHECK(k2[0] == 0.0);

    // observer states cancel identical measurements
    s.w_hat(im, 0) = 1e-3;
    Measurements ms;
    ms.ybar1 = 1e-3;
    Vec2 k3 = correction_terms(ms, s, op, g, 1.0);
    CHECK(k3[0] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("point-injection weights integrate to unit mass") {
    Grid g(13, 13, 1.0, 1.0);
    for (bool mollify : {false, true}) {
        auto d = dirac_weights(g, mollify);
        EdgeProfile p(Edge::B2, g.N1);
        for (int i = 0; i < g.N1; ++i) p[i] = d[(size_t)i];
        CHECK(integrate_edge(p, g) == doctest::Approx(1.0).epsilon(1e-14));
        // quadrature of weight * test = test(measurement node)
        int im = ObserverParams::measurement_node(g);
        if (!mollify) {
            for (int i = 0; i < g.N1; ++i) p[i] = d[(size_t)i] * g.z1(i);
            CHECK(integrate_edge(p, g) == doctest::Approx(g.z1(im)).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(ObserverParams::measurement_node(Grid(12, 13, 1.0, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("observer rhs is the plant copy when corrections vanish") {
    Grid g(13, 13, 1.0, 1.0);
    PlateParams pp;
    PlateModel model(g, pp, BoundaryConditions::plate_default());
    ObserverParams op;
    ActuatorParams ap;
    ap.Psi = 2.0;
    ap.sigma = 8.0;
    auto lam = lambda_samples(ap, g);

    ObserverState s(g.N1, g.N2), ds;
    s.w_hat = sample([](double z1, double z2) { return 0.1 * z1 * z1 * std::cos(z2); }, g);
    s.p_hat = sample([](double z1, double z2) { return 0.05 * z1 * (1 + z2); }, g);
    for (int j = 0; j < g.N2; ++j) s.w_hat(0, j) = s.p_hat(0, j) = 0.0;

    Vec2 u{0.37, -0.81};
    observer_rhs(s, u, {0.0, 0.0}, lam, model, op, ds);

    PlantState sp{s.w_hat, s.p_hat}, dsp;
    EdgeLoads loads = EdgeLoads::zero(g.N1);
    for (int i = 0; i < g.N1; ++i) {
        loads.bottom[(size_t)i] = lam[(size_t)i] * u[0];
        loads.top[(size_t)i] = lam[(size_t)i] * u[1];
    }
    model.rhs(sp, loads, dsp);
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) {
            CHECK(ds.w_hat(i, j) == dsp.w(i, j));
            CHECK(ds.p_hat(i, j) == dsp.p(i, j));
        }
}

TEST_CASE("correction injection is local to the measurement node") {
    Grid g(13, 13, 1.0, 1.0);
    PlateParams pp;
    PlateModel model(g, pp, BoundaryConditions::plate_default());
    ObserverParams op;
    auto lam = std::vector<double>((size_t)g.N1, 0.0);

    ObserverState s(g.N1, g.N2), ds;
    observer_rhs(s, {0.0, 0.0}, {1.0, 0.0}, lam, model, op, ds);
    int im = ObserverParams::measurement_node(g);
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) {
            CHECK(ds.w_hat(i, j) == 0.0);
            if (i == im && j == 0)
                CHECK(ds.p_hat(i, j) != 0.0);
            else
                CHECK(ds.p_hat(i, j) == 0.0);
        }
}

TEST_CASE("error energies") {
    Grid g(13, 13, 1.0, 1.0);
    PlateParams pp;
    pp.rho_A = 2.0;
    PlateModel model(g, pp, BoundaryConditions::plate_default());
    ObserverParams op;

    PlantState plant(g.N1, g.N2);
    ObserverState obs(g.N1, g.N2);
    auto e0 = error_energies(plant, obs, op, model);
    CHECK(e0.first == 0.0);
    CHECK(e0.second == 0.0);

    // pure momentum error p0: both energies p0^2 L1 L2 / (2 rho A)
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) plant.p(i, j) = 0.3;
    auto e1 = error_energies(plant, obs, op, model);
    CHECK(e1.first == doctest::Approx(0.09 / (2.0 * pp.rho_A)).epsilon(1e-13));
    CHECK(e1.second == doctest::Approx(e1.first).epsilon(1e-13));

    // measurement-site deflection error contributes k/2 e^2
    int im = ObserverParams::measurement_node(g);
    PlantState plant2(g.N1, g.N2);
    plant2.w(im, 0) = 1e-3;
    auto e2 = error_energies(plant2, obs, op, model);
    CHECK(e2.second - e2.first == doctest::Approx(0.5 * op.k1 * 1e-6).epsilon(1e-12));
}

TEST_CASE("collocation: correction offset changes one-step energy per its velocity") {
    // with the gains turned down the only boundary action on the error
    // system is the injected offset; the point injection is collocated, so
    // the one-step error-energy change is offset * errvel(m) * dt with the
    // midpoint velocity
    RunConfig cfg = parse_config(
        "N1 = 13\nN2 = 13\nT = 0.001\ndt = 0.001\nrecord_every = 1\n"
        "k1 = 1e-9\nk2 = 1e-9\nKd11 = 1e-9\nKd22 = 1e-9\n");
    SimSetup su = cfg.finalized();
    CoupledState x0;
    {
        Simulator s0(su, RunMode::ControlledObserver);
        x0 = s0.initial_state();
    }
    const double delta = 1e-3;
    Simulator sim(su, RunMode::ControlledObserver);
    sim.set_correction_offset({delta, 0.0});
    RunResult pert = sim.run_from(x0);

    const Grid& g = su.grid;
    int im = ObserverParams::measurement_node(g);
    const auto& s1 = pert.final_state;
    double v0 = (x0.plant.p(im, 0) - x0.obs.p_hat(im, 0)) / su.plate.rho_A;
    double v1 = (s1.plant.p(im, 0) - s1.obs.p_hat(im, 0)) / su.plate.rho_A;
    double vmid = 0.5 * (v0 + v1);

    double dH = pert.audits.back().Htilde - pert.audits.front().Htilde;
    // midpoint evaluates the exact rate, so the identity is sharp
    double predicted = delta * vmid * su.sim.dt;
    CHECK(std::abs(dH - predicted) <= 1e-9 * std::abs(predicted) + 1e-15);
}

TEST_CASE("exact-error invariance: observer initialized at the plant stays there") {
    RunConfig cfg = parse_config("N1 = 13\nN2 = 13\nT = 0.5\ndt = 0.002\n");
    SimSetup su = cfg.finalized();
    su.obs_init_d = 0.0; // observer starts identical to the (zero) plant state
    Simulator sim(su, RunMode::ControlledObserver);
    RunResult r = sim.run();
    for (const auto& a : r.audits) CHECK(std::abs(a.Htilde_d) <= 1e-16);
    // and with a nonzero shared initial state
    CoupledState x0 = sim.initial_state();
    const Grid& g = su.grid;
    for (int i = 1; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) x0.plant.w(i, j) = 1e-3 * g.z1(i) * g.z1(i) * (1 + g.z2(j));
    x0.obs.w_hat = x0.plant.w;
    x0.obs.p_hat = x0.plant.p;
    RunResult r2 = sim.run_from(x0);
    double H0 = r2.audits.front().H + 1e-30;
    for (const auto& a : r2.audits) CHECK(a.Htilde_d / H0 <= 1e-10);
}
