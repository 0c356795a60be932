#include "phplate/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace phplate {

namespace {

struct KeyEntry {
    std::function<void(RunConfig&, double)> set;
    std::function<double(const RunConfig&)> get;
    const char* doc;
};

const std::map<std::string, KeyEntry>& key_table() {
    static const std::map<std::string, KeyEntry> table = {
        {"rho_A", {[](RunConfig& c, double v) { c.setup.plate.rho_A = v; },
                   [](const RunConfig& c) { return c.setup.plate.rho_A; }, "mass per unit area"}},
        {"D_E", {[](RunConfig& c, double v) { c.setup.plate.D_E = v; },
                 [](const RunConfig& c) { return c.setup.plate.D_E; }, "flexural rigidity"}},
        {"nu", {[](RunConfig& c, double v) { c.setup.plate.nu = v; },
                [](const RunConfig& c) { return c.setup.plate.nu; }, "Poisson ratio, 0 <= nu < 0.5"}},
        {"L1", {[](RunConfig& c, double v) { c.setup.plate.L1 = v; },
                [](const RunConfig& c) { return c.setup.plate.L1; }, "side length along z1"}},
        {"L2", {[](RunConfig& c, double v) { c.setup.plate.L2 = v; },
                [](const RunConfig& c) { return c.setup.plate.L2; }, "side length along z2"}},
        {"N1", {[](RunConfig& c, double v) { c.N1 = (int)v; },
                [](const RunConfig& c) { return (double)c.N1; }, "nodes along z1 (N1 = 1 mod 4)"}},
        {"N2", {[](RunConfig& c, double v) { c.N2 = (int)v; },
                [](const RunConfig& c) { return (double)c.N2; }, "nodes along z2 (odd)"}},
        {"dt", {[](RunConfig& c, double v) { c.setup.sim.dt = v; },
                [](const RunConfig& c) { return c.setup.sim.dt; }, "time step"}},
        {"T", {[](RunConfig& c, double v) { c.setup.sim.T = v; },
               [](const RunConfig& c) { return c.setup.sim.T; }, "final time"}},
        {"record_every", {[](RunConfig& c, double v) { c.setup.sim.record_every = (int)v; },
                          [](const RunConfig& c) { return (double)c.setup.sim.record_every; },
                          "audit cadence in steps"}},
        {"snapshot_every", {[](RunConfig& c, double v) { c.setup.sim.snapshot_every = (int)v; },
                            [](const RunConfig& c) { return (double)c.setup.sim.snapshot_every; },
                            "deflection snapshot cadence in steps (0: first/last)"}},
        {"solver_tol", {[](RunConfig& c, double v) { c.setup.sim.solver_tol = v; },
                        [](const RunConfig& c) { return c.setup.sim.solver_tol; },
                        "accepted linear-solve residual"}},
        {"Psi", {[](RunConfig& c, double v) { c.setup.act.Psi = v; },
                 [](const RunConfig& c) { return c.setup.act.Psi; }, "actuator amplitude"}},
        {"sigma", {[](RunConfig& c, double v) { c.setup.act.sigma = v; },
                   [](const RunConfig& c) { return c.setup.act.sigma; }, "actuator sharpness, > 0"}},
        {"a", {[](RunConfig& c, double v) { c.setup.eq.a = v; },
               [](const RunConfig& c) { return c.setup.eq.a; }, "target curvature coefficient, > 0"}},
        {"b", {[](RunConfig& c, double v) { c.setup.eq.b = v; },
               [](const RunConfig& c) { return c.setup.eq.b; }, "target slope, > 0"}},
        {"c1", {[](RunConfig& c, double v) { c.setup.ctrl.c1 = v; },
                [](const RunConfig& c) { return c.setup.ctrl.c1; }, "energy-shaping stiffness 1"}},
        {"c2", {[](RunConfig& c, double v) { c.setup.ctrl.c2 = v; },
                [](const RunConfig& c) { return c.setup.ctrl.c2; }, "energy-shaping stiffness 2"}},
        {"Jc34", {[](RunConfig& c, double v) { c.setup.ctrl.Jc34 = v; },
                  [](const RunConfig& c) { return c.setup.ctrl.Jc34; }, "damping-block interconnection"}},
        {"Rc33", {[](RunConfig& c, double v) { c.setup.ctrl.Rc33 = v; },
                  [](const RunConfig& c) { return c.setup.ctrl.Rc33; }, "damping-block dissipation"}},
        {"Rc34", {[](RunConfig& c, double v) { c.setup.ctrl.Rc34 = v; },
                  [](const RunConfig& c) { return c.setup.ctrl.Rc34; }, "damping-block dissipation"}},
        {"Rc44", {[](RunConfig& c, double v) { c.setup.ctrl.Rc44 = v; },
                  [](const RunConfig& c) { return c.setup.ctrl.Rc44; }, "damping-block dissipation"}},
        {"G31", {[](RunConfig& c, double v) { c.setup.ctrl.G31 = v; },
                 [](const RunConfig& c) { return c.setup.ctrl.G31; }, "input map, state 3 <- channel 1"}},
        {"G32", {[](RunConfig& c, double v) { c.setup.ctrl.G32 = v; },
                 [](const RunConfig& c) { return c.setup.ctrl.G32; }, "input map, state 3 <- channel 2"}},
        {"G41", {[](RunConfig& c, double v) { c.setup.ctrl.G41 = v; },
                 [](const RunConfig& c) { return c.setup.ctrl.G41; }, "input map, state 4 <- channel 1"}},
        {"G42", {[](RunConfig& c, double v) { c.setup.ctrl.G42 = v; },
                 [](const RunConfig& c) { return c.setup.ctrl.G42; }, "input map, state 4 <- channel 2"}},
        {"Mc33", {[](RunConfig& c, double v) { c.setup.ctrl.Mc33 = v; },
                  [](const RunConfig& c) { return c.setup.ctrl.Mc33; }, "damping-block energy matrix"}},
        {"Mc34", {[](RunConfig& c, double v) { c.setup.ctrl.Mc34 = v; },
                  [](const RunConfig& c) { return c.setup.ctrl.Mc34; }, "damping-block energy matrix"}},
        {"Mc44", {[](RunConfig& c, double v) { c.setup.ctrl.Mc44 = v; },
                  [](const RunConfig& c) { return c.setup.ctrl.Mc44; }, "damping-block energy matrix"}},
        {"us1", {[](RunConfig& c, double v) { c.setup.ctrl.us1 = v; },
                 [](const RunConfig& c) { return c.setup.ctrl.us1; }, "steady-state voltage 1"}},
        {"us2", {[](RunConfig& c, double v) { c.setup.ctrl.us2 = v; },
                 [](const RunConfig& c) { return c.setup.ctrl.us2; }, "steady-state voltage 2"}},
        {"xc1_d", {[](RunConfig& c, double v) { c.setup.ctrl.xc1_d = v; },
                   [](const RunConfig& c) { return c.setup.ctrl.xc1_d; },
                   "set-point 1 (nan: from the target profile)"}},
        {"xc2_d", {[](RunConfig& c, double v) { c.setup.ctrl.xc2_d = v; },
                   [](const RunConfig& c) { return c.setup.ctrl.xc2_d; },
                   "set-point 2 (nan: from the target profile)"}},
        {"k1", {[](RunConfig& c, double v) { c.setup.obs.k1 = v; },
                [](const RunConfig& c) { return c.setup.obs.k1; }, "observer energy-shaping gain 1"}},
        {"k2", {[](RunConfig& c, double v) { c.setup.obs.k2 = v; },
                [](const RunConfig& c) { return c.setup.obs.k2; }, "observer energy-shaping gain 2"}},
        {"Kd11", {[](RunConfig& c, double v) { c.setup.obs.Kd11 = v; },
                  [](const RunConfig& c) { return c.setup.obs.Kd11; }, "observer damping gain 1"}},
        {"Kd22", {[](RunConfig& c, double v) { c.setup.obs.Kd22 = v; },
                  [](const RunConfig& c) { return c.setup.obs.Kd22; }, "observer damping gain 2"}},
        {"dirac_mollify", {[](RunConfig& c, double v) { c.setup.obs.mollify = v != 0.0; },
                           [](const RunConfig& c) { return c.setup.obs.mollify ? 1.0 : 0.0; },
                           "spread the point injection over 3 nodes (0/1)"}},
        {"obs_init_d", {[](RunConfig& c, double v) { c.setup.obs_init_d = v; },
                        [](const RunConfig& c) { return c.setup.obs_init_d; },
                        "observer initial profile coefficient"}},
    };
    return table;
}

[[noreturn]] void fail(int line_no, const std::string& line, const std::string& why) {
    std::ostringstream os;
    os << "config error at line " << line_no << " ('" << line << "'): " << why;
    throw std::invalid_argument(os.str());
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    cfg.setup.ctrl.xc1_d = std::nan("");
    cfg.setup.ctrl.xc2_d = std::nan("");
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = line;
        auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        auto notspace = [](unsigned char ch) { return !std::isspace(ch); };
        s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
        s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) fail(line_no, line, "expected 'key = value'");
        std::string key = s.substr(0, eq);
        std::string val = s.substr(eq + 1);
        key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
        val.erase(val.begin(), std::find_if(val.begin(), val.end(), notspace));
        if (key.empty()) fail(line_no, line, "empty key");
        if (key == "out_dir") {
            cfg.out_dir = val;
            continue;
        }
        auto it = key_table().find(key);
        if (it == key_table().end()) fail(line_no, line, "unknown key '" + key + "'");
        if (++seen[key] > 1) fail(line_no, line, "key '" + key + "' specified twice");
        try {
            size_t pos = 0;
            double v = std::stod(val, &pos);
            while (pos < val.size() && std::isspace((unsigned char)val[pos])) ++pos;
            if (pos != val.size()) throw std::invalid_argument("trailing characters");
            it->second.set(cfg, v);
        } catch (const std::exception&) {
            fail(line_no, line, "cannot parse value '" + val + "' for key '" + key + "'");
        }
    }
    // range checks with key-level messages
    try {
        cfg.setup.grid = Grid(cfg.N1, cfg.N2, cfg.setup.plate.L1, cfg.setup.plate.L2);
        SimSetup probe = cfg.setup;
        probe.finalize();
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config validation failed: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    if (path.empty()) return parse_config("");
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

SimSetup RunConfig::finalized() const {
    SimSetup s = setup;
    s.grid = Grid(N1, N2, setup.plate.L1, setup.plate.L2);
    s.finalize();
    return s;
}

std::string config_reference() {
    RunConfig defaults;
    defaults.setup.ctrl.xc1_d = std::nan("");
    defaults.setup.ctrl.xc2_d = std::nan("");
    std::ostringstream os;
    os << "# run configuration: one 'key = value' per line, '#' comments\n";
    char buf[64];
    for (const auto& [key, entry] : key_table()) {
        double v = entry.get(defaults);
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << key << " = " << buf << "  # " << entry.doc << "\n";
    }
    os << "out_dir = out  # output directory for the simulate command\n";
    return os.str();
}

} // namespace phplate
