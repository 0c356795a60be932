#include "phplate/verify.hpp"

#include "phplate/csvio.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <ostream>
#include <random>

namespace phplate {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

CheckResult make(const std::string& name, double measured, double allowed, bool pass,
                 const std::string& detail, double secs) {
    return CheckResult{name, pass, measured, allowed, detail, secs};
}

double rms(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s / (double)v.size());
}

std::vector<double> profile_error(const std::vector<double>& prof, const std::vector<double>& wd) {
    std::vector<double> e(prof.size());
    for (size_t k = 0; k < prof.size(); ++k) e[k] = prof[k] - wd[k];
    return e;
}

} // namespace

std::vector<CheckResult> check_stencil_oracle(const RunConfig& cfg) {
    auto t0 = Clock::now();
    Grid g(cfg.N1, cfg.N2, cfg.setup.plate.L1, cfg.setup.plate.L2);
    auto quart = sample_extended([](double z1, double) { return z1 * z1 * z1 * z1; }, g);
    auto cross = sample_extended([](double z1, double z2) { return z1 * z1 * z2 * z2; }, g);

    auto biharm = [&](const GhostField& f) {
        Field w40 = partial(f, {4, 0}, g);
        Field w22 = partial(f, {2, 2}, g);
        Field w04 = partial(f, {0, 4}, g);
        Field r(g.N1, g.N2);
        for (int i = 0; i < g.N1; ++i)
            for (int j = 0; j < g.N2; ++j)
                r(i, j) = w40(i, j) + 2.0 * w22(i, j) + w04(i, j);
        return r;
    };
    Field b1 = biharm(quart), b2 = biharm(cross);
    double e1 = 0.0, e2 = 0.0;
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) {
            e1 = std::max(e1, std::abs(b1(i, j) - 24.0) / 24.0);
            e2 = std::max(e2, std::abs(b2(i, j) - 8.0) / 8.0);
        }
    double secs = seconds_since(t0);
    return {make("stencil biharmonic (z1^4 -> 24)", e1, 1e-9, e1 <= 1e-9 && secs < 1.0,
                 "max relative error at the nodes", secs),
            make("stencil biharmonic (z1^2 z2^2 -> 8)", e2, 1e-9, e2 <= 1e-9, "", secs)};
}

std::vector<CheckResult> check_modal_frequency(const RunConfig& cfg) {
    auto t0 = Clock::now();
    SimSetup su = cfg.finalized();
    su.bc = BoundaryConditions::simply_supported();
    su.sim.T = 1.6;
    su.sim.record_every = 5;
    su.sim.snapshot_every = 5;
    Simulator sim(su, RunMode::OpenLoop);
    const Grid& g = su.grid;
    CoupledState x0 = sim.initial_state();
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j)
            x0.plant.w(i, j) = 1e-3 * std::sin(pi * g.z1(i) / g.L1) * std::sin(pi * g.z2(j) / g.L2);
    RunResult r = sim.run_from(x0);

    int ic = (g.N1 - 1) / 2, jc = (g.N2 - 1) / 2;
    std::vector<double> t, w;
    for (const auto& [ts, snap] : r.snapshots) {
        t.push_back(ts);
        w.push_back(snap(ic, jc));
    }
    std::vector<double> crossings;
    for (size_t k = 1; k < w.size(); ++k)
        if ((w[k - 1] > 0.0 && w[k] <= 0.0) || (w[k - 1] < 0.0 && w[k] >= 0.0)) {
            double f = w[k - 1] / (w[k - 1] - w[k]);
            crossings.push_back(t[k - 1] + f * (t[k] - t[k - 1]));
        }
    double omega = 0.0;
    if (crossings.size() >= 2)
        omega = pi * (double)(crossings.size() - 1) / (crossings.back() - crossings.front());
    double omega_ref = std::sqrt(su.plate.D_E / su.plate.rho_A) * 2.0 * pi * pi / (su.plate.L1 * su.plate.L1);
    double rel = std::abs(omega - omega_ref) / omega_ref;
    double secs = seconds_since(t0);
    return {make("mode (1,1) frequency vs analytic", rel, 0.02, rel <= 0.02 && secs < 30.0,
                 "omega = " + fmt_g17(omega) + " vs " + fmt_g17(omega_ref), secs)};
}

std::vector<CheckResult> check_open_loop_conservation(const RunConfig& cfg) {
    auto t0 = Clock::now();
    SimSetup su = cfg.finalized();
    su.sim.T = 5.0;
    su.sim.dt = 1e-3;
    su.sim.record_every = 100;
    su.sim.solver_tol = 1e-12;
    Simulator sim(su, RunMode::OpenLoop);
    const Grid& g = su.grid;
    CoupledState x0 = sim.initial_state();
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) {
            double s1 = g.z1(i) / g.L1, s2 = g.z2(j) / g.L2;
            x0.plant.p(i, j) = 16.0 * s1 * s1 * (1.0 - s1) * (1.0 - s1) *
                               (0.3 + std::sin(3.1 * s2 + 0.4));
        }
    RunResult r = sim.run_from(x0);
    double H0 = r.audits.front().H, drift = 0.0;
    for (const auto& a : r.audits) drift = std::max(drift, std::abs(a.H - H0) / H0);
    double secs = seconds_since(t0);
    return {make("open-loop energy conservation over T=5", drift, 1e-8,
                 drift <= 1e-8 && secs < 120.0, "max |H - H0| / H0", secs)};
}

std::vector<CheckResult> check_power_balance_refinement(const RunConfig& cfg) {
    auto t0 = Clock::now();
    auto residual_max = [&](int n) {
        RunConfig c = cfg;
        c.N1 = c.N2 = n;
        SimSetup su = c.finalized();
        su.sim.T = 2.0;
        su.sim.dt = 2.5e-4;
        su.sim.record_every = 1;
        Simulator sim(su, RunMode::OpenLoop);
        const double pi = 3.14159265358979323846;
        RunResult r = sim.run_forced([&](double t) { return Vec2{std::sin(2.0 * pi * t), 0.0}; });
        double m = 0.0;
        for (double x : r.balance_residuals) m = std::max(m, std::abs(x));
        return m;
    };
    double r21 = residual_max(21);
    double r41 = residual_max(41);
    double factor = r21 / r41;
    double secs = seconds_since(t0);
    bool pass = factor >= 3.0 && factor <= 5.0 && secs < 300.0;
    return {make("power-balance residual refinement 21 -> 41", factor, 4.0, pass,
                 "max residual " + fmt_g17(r21) + " -> " + fmt_g17(r41) +
                     ", factor must lie in [3, 5]",
                 secs)};
}

std::vector<CheckResult> check_controlled_run(const RunConfig& cfg, double* rms40_out) {
    auto t0 = Clock::now();
    SimSetup su = cfg.finalized();
    su.sim.T = 40.0;
    Simulator sim(su, RunMode::Controlled);
    RunResult r = sim.run();
    double secs = seconds_since(t0);

    std::vector<CheckResult> out;
    // criterion 5: closed-loop dissipativity
    double eps = 10.0 * su.sim.solver_tol * r.audits.front().Hcl;
    double worst = -1e300;
    for (size_t k = 1; k < r.audits.size(); ++k)
        worst = std::max(worst, r.audits[k].Hcl - r.audits[k - 1].Hcl);
    out.push_back(make("closed-loop dissipativity H_cl nonincreasing", worst, eps, worst <= eps,
                       "max one-record increase of H_cl", secs));

    // criterion 6: Casimir invariance
    for (int ch = 0; ch < 2; ++ch) {
        double drift = r.casimir_drift(ch);
        double xmax = 0.0;
        for (const auto& a : r.audits) xmax = std::max(xmax, std::abs(a.xc[(size_t)ch]));
        double allowed = 1e-3 * xmax;
        out.push_back(make("Casimir invariance channel " + std::to_string(ch + 1), drift, allowed,
                           drift <= allowed, "max |C(t) - C(0)| vs 1e-3 max |xc|", secs));
    }

    // criterion 7: equilibrium stabilization
    const Grid& g = su.grid;
    std::vector<double> wd((size_t)g.N1);
    for (int i = 0; i < g.N1; ++i) wd[(size_t)i] = desired_profile(g.z1(i), su.eq, g.L1);
    auto rms_at = [&](double tt) {
        size_t best = 0;
        double dbest = 1e300;
        for (size_t k = 0; k < r.audits.size(); ++k) {
            double d = std::abs(r.audits[k].t - tt);
            if (d < dbest) {
                dbest = d;
                best = k;
            }
        }
        return rms(profile_error(r.edge_profiles[best], wd));
    };
    double wdn = rms(wd);
    double e40 = rms_at(40.0) / wdn, e10 = rms_at(10.0) / wdn;
    bool p1 = e40 <= 0.25;
    bool p2 = e40 <= 0.5 * e10;
    bool p3 = secs < 600.0;
    out.push_back(make("edge profile error at T=40", e40, 0.25, p1 && p3,
                       "RMS(w - w_d)/RMS(w_d) on the actuated edge", secs));
    out.push_back(make("edge profile approach (T=40 vs T=10)", e40 / e10, 0.5, p2,
                       "error ratio, T=10 value " + fmt_g17(e10), secs));
    if (rms40_out) *rms40_out = e40;
    return out;
}

std::vector<CheckResult> check_observer_run(const RunConfig& cfg, double rms40_controlled) {
    auto t0 = Clock::now();
    SimSetup su = cfg.finalized();
    su.sim.T = 40.0;
    Simulator sim(su, RunMode::ControlledObserver);
    RunResult r = sim.run();
    double secs = seconds_since(t0);

    std::vector<CheckResult> out;
    double Htd0 = r.audits.front().Htilde_d;
    double eps = 10.0 * su.sim.solver_tol * Htd0;
    double worst = -1e300;
    for (size_t k = 1; k < r.audits.size(); ++k)
        worst = std::max(worst, r.audits[k].Htilde_d - r.audits[k - 1].Htilde_d);
    out.push_back(make("observer error energy nonincreasing", worst, eps, worst <= eps,
                       "max one-record increase of the shaped error energy", secs));

    double Htd10 = 0.0;
    for (const auto& a : r.audits)
        if (std::abs(a.t - 10.0) < 1e-9) Htd10 = a.Htilde_d;
    out.push_back(make("observer error energy decay by t=10", Htd10 / Htd0, 0.01,
                       Htd10 <= 0.01 * Htd0, "H_err_shaped(10)/H_err_shaped(0)", secs));

    const auto& last = r.audits.back();
    double probe_err = std::abs(last.w_probe - last.w_hat_probe);
    double wdL1 = desired_profile(su.grid.L1, su.eq, su.grid.L1);
    out.push_back(make("observer probe agreement at T=40", probe_err, 0.05 * std::abs(wdL1),
                       probe_err <= 0.05 * std::abs(wdL1),
                       "|w - w_hat| at (L1, L2/2) vs 5% of w_d(L1)", secs));

    const Grid& g = su.grid;
    std::vector<double> wd((size_t)g.N1);
    for (int i = 0; i < g.N1; ++i) wd[(size_t)i] = desired_profile(g.z1(i), su.eq, g.L1);
    double e40 = rms(profile_error(r.edge_profiles.back(), wd)) / rms(wd);
    out.push_back(make("observer-in-loop profile error at T=40", e40, 1.5 * rms40_controlled,
                       e40 <= 1.5 * rms40_controlled,
                       "vs 1.5x the full-state-feedback value " + fmt_g17(rms40_controlled), secs));
    return out;
}

std::vector<CheckResult> check_operator_oracle(const RunConfig& cfg) {
    auto t0 = Clock::now();
    std::vector<CheckResult> out;
    std::mt19937 rng(987654);
    std::normal_distribution<double> dist(0.0, 1.0);

    for (RunMode mode : {RunMode::Controlled, RunMode::ControlledObserver}) {
        SimSetup su = cfg.finalized();
        Simulator sim(su, mode);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            Eigen::VectorXd x(sim.state_dim());
            for (int k = 0; k < x.size(); ++k) x[k] = dist(rng);
            CoupledState s = sim.unpack(x), ds;
            sim.coupled_rhs(s, ds);
            Eigen::VectorXd r1 = sim.pack(ds);
            Eigen::VectorXd r2 = sim.A() * x + sim.b();
            worst = std::max(worst, (r1 - r2).lpNorm<Eigen::Infinity>() /
                                        r1.lpNorm<Eigen::Infinity>());
        }
        out.push_back(make(std::string("assembled operator vs modular rhs (") +
                               (mode == RunMode::Controlled ? "controlled" : "observer") + ")",
                           worst, 1e-12, worst <= 1e-12, "relative mismatch on random states",
                           seconds_since(t0)));
    }

    // zero-correction observer reproduces the plant fields bitwise
    SimSetup su = cfg.finalized();
    su.obs.correction_enabled = false;
    su.sim.T = 0.2;
    su.sim.record_every = 10;
    Simulator sim(su, RunMode::ControlledObserver);
    CoupledState x0 = sim.initial_state();
    const Grid& g = su.grid;
    for (int i = 0; i < g.N1; ++i)
        for (int j = 0; j < g.N2; ++j) {
            double s1 = g.z1(i) / g.L1, s2 = g.z2(j) / g.L2;
            double v = 0.01 * s1 * s1 * (1.0 - 0.5 * s2) * s2;
            if (!sim.model().pinned(i, j)) {
                x0.plant.w(i, j) = v;
                x0.plant.p(i, j) = 0.5 * v;
            }
        }
    x0.obs.w_hat = x0.plant.w;
    x0.obs.p_hat = x0.plant.p;
    RunResult r = sim.run_from(x0);
    const PlantState& pl = r.final_state.plant;
    const ObserverState& ob = r.final_state.obs;
    bool same = std::memcmp(pl.w.data(), ob.w_hat.data(), pl.w.size() * sizeof(double)) == 0 &&
                std::memcmp(pl.p.data(), ob.p_hat.data(), pl.p.size() * sizeof(double)) == 0;
    out.push_back(make("zero-correction observer is a bitwise plant copy", same ? 0.0 : 1.0, 0.0,
                       same, "memcmp of the final fields", seconds_since(t0)));
    return out;
}

bool run_verification(const RunConfig& cfg, std::ostream& os) {
    std::vector<CheckResult> all;
    auto add = [&](std::vector<CheckResult> v) {
        for (auto& c : v) all.push_back(std::move(c));
    };
    add(check_stencil_oracle(cfg));
    add(check_modal_frequency(cfg));
    add(check_open_loop_conservation(cfg));
    add(check_power_balance_refinement(cfg));
    double rms40 = 0.0;
    add(check_controlled_run(cfg, &rms40));
    add(check_observer_run(cfg, rms40));
    add(check_operator_oracle(cfg));

    bool ok = true;
    for (const auto& c : all) {
        ok = ok && c.pass;
        os << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  measured=" << fmt_g17(c.measured)
           << " allowed=" << fmt_g17(c.allowed);
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << "  [" << fmt_g17(c.seconds) << " s]\n";
    }
    os << (ok ? "all checks passed\n" : "some checks FAILED\n");
    return ok;
}

} // namespace phplate
