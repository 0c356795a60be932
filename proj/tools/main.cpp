#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "phplate/csvio.hpp"
#include "phplate/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace phplate;

namespace {

void apply_thread_env() {
    const char* env = std::getenv("PHPLATE_THREADS");
    if (!env) {
#ifdef _OPENMP
        kernels::set_default_backend(kernels::Backend::OpenMP);
#endif
        return;
    }
    int n = std::atoi(env);
    if (n <= 0) n = 1;
    kernels::set_thread_cap(n);
    kernels::set_default_backend(n == 1 ? kernels::Backend::Serial : kernels::Backend::OpenMP);
}

RunMode parse_mode(const std::string& m) {
    if (m == "open-loop") return RunMode::OpenLoop;
    if (m == "controlled") return RunMode::Controlled;
    if (m == "controlled-observer") return RunMode::ControlledObserver;
    throw CLI::ValidationError("--mode", "expected open-loop, controlled or controlled-observer");
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_env();

    CLI::App app{"boundary-controlled Kirchhoff-Love plate simulator with energy audit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, mode_str = "controlled";

    auto* sim_cmd = app.add_subcommand("simulate", "run a simulation and write CSV audits");
    sim_cmd->add_option("--config", config_path, "configuration file (key = value lines)");
    sim_cmd->add_option("--mode", mode_str,
                        "open-loop | controlled | controlled-observer")
        ->default_val("controlled");
    sim_cmd->add_option("--out", out_dir, "output directory (overrides config out_dir)");

    auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
    verify_cmd->add_option("--config", config_path, "configuration file");

    auto* profile_cmd = app.add_subcommand("profile", "dump actuator and target profiles");
    profile_cmd->add_option("--config", config_path, "configuration file");
    profile_cmd->add_option("--out", out_dir, "output directory (overrides config out_dir)");

    auto* ref_cmd = app.add_subcommand("config-reference", "print the full key set with defaults");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ref_cmd->parsed()) {
            std::cout << config_reference();
            return 0;
        }
        RunConfig cfg = load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;

        if (sim_cmd->parsed()) {
            Simulator sim(cfg.finalized(), parse_mode(mode_str));
            RunResult r = sim.run();
            write_run_outputs(r, sim, cfg.out_dir);
            std::cout << "wrote " << cfg.out_dir << " (" << r.audits.size()
                      << " audit records, max solver residual "
                      << fmt_g17(r.max_solver_residual) << ")\n";
            return 0;
        }
        if (verify_cmd->parsed()) {
            bool ok = run_verification(cfg, std::cout);
            return ok ? 0 : 1;
        }
        if (profile_cmd->parsed()) {
            write_profile_outputs(cfg.finalized(), cfg.out_dir);
            std::cout << "wrote " << cfg.out_dir << "/profile.csv\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
