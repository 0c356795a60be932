#pragma once

#include <string>
#include <vector>

#include "phplate/simulate.hpp"

namespace phplate {

/// Full-precision, locale-independent number formatting (17 significant digits).
std::string fmt_g17(double v);

/// Write the audit streams of a run into the output directory:
///   energies.csv, casimir.csv, boundary_profile.csv, observer_compare.csv,
///   snapshots/w_<t>.csv
/// Column order is fixed; repeated runs of the same configuration produce
/// bit-identical files.
void write_run_outputs(const RunResult& r, const Simulator& sim, const std::string& out_dir);

/// Lambda / target-profile dump behind the actuator figures: profile.csv.
void write_profile_outputs(const SimSetup& setup, const std::string& out_dir);

} // namespace phplate
