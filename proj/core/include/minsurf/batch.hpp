#pragma once

#include <string>
#include <vector>

#include "minsurf/config.hpp"
#include "minsurf/families.hpp"
#include "minsurf/shape.hpp"

namespace minsurf {

/// Instantiates the configured family (throws ConfigError / BadBasis /
/// EmptyInterval / expression errors).
Immersion build_immersion(const RunConfig& rc);

/// Grid with per-family defaults filled in for unspecified axes.  The
/// periodic chart axes default to a uniform half-open period.
GridSpec effective_grid(const RunConfig& rc, const Immersion& imm);

/// Check set: family defaults (everything applicable except the expensive
/// nested-FD frame PDE system) plus the config's on/off deltas, in stable
/// order.
std::vector<std::string> effective_checks(const RunConfig& rc, const Immersion& imm);

struct VerifyResult {
  ResidualReport report;
  std::string csv;   // empty unless a csv path was configured
  std::string json;  // empty unless a json path was configured
  int exit_code = 0; // 0 pass, 1 tolerance failure, 3 exclusion budget blown
};

/// Runs the configured scan and renders the output artifacts in memory.
VerifyResult run_verify(const RunConfig& rc, const DiffConfig& dcfg = {});

/// Point-cloud CSV (fixed header, 17 significant digits) over the grid.
std::string make_sample_csv(const Immersion& imm, const GridSpec& grid, const DiffConfig& dcfg);

/// CLI entry point: subcommands verify / ode / sample / report.
/// Exit codes: 0 pass, 1 tolerance failure, 2 config or parse error,
/// 3 numerical failure.
int run(int argc, const char* const* argv);

}  // namespace minsurf
