#pragma once

#include <string>

#include "phplate/simulate.hpp"

namespace phplate {

/// Flat key = value run configuration.  Missing keys take the documented
/// defaults; unknown or repeated keys are rejected with the offending line.
struct RunConfig {
    SimSetup setup;
    int N1 = 41, N2 = 41;
    std::string out_dir = "out";

    /// build the finalized setup (grid constructed, set-points resolved)
    SimSetup finalized() const;
};

/// Parse configuration text.  Format: one `key = value` per line, `#`
/// comments, blank lines ignored.
RunConfig parse_config(const std::string& text);

/// Parse a configuration file; empty path yields the default configuration.
RunConfig load_config(const std::string& path);

/// The documented key set, one `key = default  # comment` per line.
std::string config_reference();

} // namespace phplate
