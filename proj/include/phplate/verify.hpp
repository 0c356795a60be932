#pragma once

#include <string>
#include <vector>

#include "phplate/config.hpp"

namespace phplate {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double allowed = 0.0;
    std::string detail;
    double seconds = 0.0;
};

/// The acceptance checks, in order.  Each returns one or more results; all
/// tolerances are fixed here.
std::vector<CheckResult> check_stencil_oracle(const RunConfig& cfg);
std::vector<CheckResult> check_modal_frequency(const RunConfig& cfg);
std::vector<CheckResult> check_open_loop_conservation(const RunConfig& cfg);
std::vector<CheckResult> check_power_balance_refinement(const RunConfig& cfg);
/// dissipativity, Casimir invariance and equilibrium stabilization share one
/// controlled run; observer checks share one controlled-observer run
std::vector<CheckResult> check_controlled_run(const RunConfig& cfg, double* rms40_out = nullptr);
std::vector<CheckResult> check_observer_run(const RunConfig& cfg, double rms40_controlled);
std::vector<CheckResult> check_operator_oracle(const RunConfig& cfg);

/// Run the complete suite and print one pass/fail line per check.
/// Returns true when everything passed.
bool run_verification(const RunConfig& cfg, std::ostream& os);

} // namespace phplate
