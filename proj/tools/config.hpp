#ifndef FST_TOOLS_CONFIG_HPP
#define FST_TOOLS_CONFIG_HPP

#include <set>
#include <string>

#include "fst/diagnostics.hpp"
#include "fst/solver.hpp"

namespace fst::cli {

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool json = true;
    bool svg = false;
    bool family_csv = true;
    std::set<std::string> plots = {"worldlines", "gap", "decay"};
};

/// One experiment: scattering data, solver and diagnostics settings, output
/// selections. Parsed from a strict JSON file; unknown keys are rejected.
struct RunConfig {
    AsymptoticData data;
    SolverConfig solver;
    DiagnosticsConfig diagnostics;
    OutputConfig output;
};

/// Parses and validates `text`. Throws ConfigError with a line/column
/// message on syntax errors and a JSON-path message on semantic ones.
RunConfig parse_run_config(const std::string& text);

/// Reads the file and delegates to parse_run_config.
RunConfig load_run_config(const std::string& path);

}  // namespace fst::cli

#endif
