#include "phplate/csvio.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace phplate {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write output file '" + p.string() + "'");
    return f;
}

void write_row(std::ofstream& f, const std::vector<double>& vals) {
    for (size_t k = 0; k < vals.size(); ++k) {
        if (k) f << ',';
        f << fmt_g17(vals[k]);
    }
    f << '\n';
}

} // namespace

void write_run_outputs(const RunResult& r, const Simulator& sim, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::path dir(out_dir);
    fs::create_directories(dir / "snapshots");

    {
        auto f = open_out(dir / "energies.csv");
        f << "t,H,H_c,H_cl,H_err,H_err_shaped,port_power,u1,u2,w_m1,w_m2,w_probe,w_hat_probe\n";
        for (const auto& a : r.audits)
            write_row(f, {a.t, a.H, a.Hc, a.Hcl, a.Htilde, a.Htilde_d, a.port_power, a.u1, a.u2,
                          a.w_m1, a.w_m2, a.w_probe, a.w_hat_probe});
    }
    {
        auto f = open_out(dir / "casimir.csv");
        f << "t,C1,C2,C1_drift,C2_drift\n";
        double c10 = r.audits.empty() ? 0.0 : r.audits.front().C1;
        double c20 = r.audits.empty() ? 0.0 : r.audits.front().C2;
        for (const auto& a : r.audits)
            write_row(f, {a.t, a.C1, a.C2, std::abs(a.C1 - c10), std::abs(a.C2 - c20)});
    }
    {
        auto f = open_out(dir / "balance.csv");
        f << "t,residual\n";
        for (size_t k = 0; k < r.balance_residuals.size(); ++k)
            write_row(f, {r.record_dt * (double)(k + 1), r.balance_residuals[k]});
    }
    {
        auto f = open_out(dir / "boundary_profile.csv");
        const Grid& g = sim.setup().grid;
        f << "t";
        for (int i = 0; i < g.N1; ++i) f << ",w_z1_" << fmt_g17(g.z1(i));
        f << '\n';
        for (size_t k = 0; k < r.edge_profiles.size(); ++k) {
            std::vector<double> row;
            row.reserve(r.edge_profiles[k].size() + 1);
            row.push_back(r.audits[k].t);
            row.insert(row.end(), r.edge_profiles[k].begin(), r.edge_profiles[k].end());
            write_row(f, row);
        }
    }
    {
        auto f = open_out(dir / "observer_compare.csv");
        f << "t,w_probe,w_hat_probe\n";
        for (const auto& a : r.audits) write_row(f, {a.t, a.w_probe, a.w_hat_probe});
    }
    for (const auto& [t, w] : r.snapshots) {
        auto f = open_out(dir / "snapshots" / ("w_" + fmt_g17(t) + ".csv"));
        for (int i = 0; i < w.n1(); ++i) {
            for (int j = 0; j < w.n2(); ++j) {
                if (j) f << ',';
                f << fmt_g17(w(i, j));
            }
            f << '\n';
        }
    }
}

void write_profile_outputs(const SimSetup& setup, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir));
    auto f = open_out(fs::path(out_dir) / "profile.csv");
    f << "z1,lambda,w_d\n";
    const Grid& g = setup.grid;
    for (int i = 0; i < g.N1; ++i) {
        write_row(f, {g.z1(i), lambda_profile(g.z1(i), setup.act, g.L1),
                      desired_profile(g.z1(i), setup.eq, g.L1)});
    }
}

} // namespace phplate
