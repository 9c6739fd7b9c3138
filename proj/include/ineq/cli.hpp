#pragma once

// Command-line surface tying the pipeline together.  Four subcommands:
//   estimate  censored household CSV + run config -> report, traces, manifest
//   synth     synthetic-truth config -> censored data CSV + truth oracle CSV
//   validate  household CSV -> per-row rule and feasibility diagnostics
//   coverage  R replications of synth -> estimate, with per-index coverage
// Every command that writes files also writes a manifest.json naming the
// seed, input hashes, effective configuration and code version, so each
// artifact is exactly reproducible.  Exit codes follow the shared error
// taxonomy: 0 ok, 1 infeasible data, 2 malformed input, 3 internal failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace ineq::cli {

inline constexpr const char* kVersion = "ineq 1.0.0";

// Executes one command line (program name excluded).  Human-readable output
// goes to `out`, diagnostics and progress to `err`; returns the exit code.
int dispatch(std::vector<std::string> args, std::ostream& out,
             std::ostream& err);

}  // namespace ineq::cli
