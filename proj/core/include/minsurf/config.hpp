#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "minsurf/types.hpp"

namespace minsurf {

struct AxisSpec {
  std::optional<double> min, max;
  std::optional<int> count;
};

/// Parsed run configuration.  Unset fields fall back to per-family defaults
/// when the run is assembled (see batch.hpp).
struct RunConfig {
  std::string family;  // example11 | example12 | cartan | expr
  std::optional<double> c1, c2;
  std::optional<std::array<Vec5, 5>> basis;   // C1..C5 overrides
  std::array<std::string, 5> components{};    // x1..x5 sources (family = expr)
  std::map<std::string, double> constants;    // const.<name> entries
  long seed = 0;
  AxisSpec u, v, z;
  std::map<std::string, bool> checks;         // on/off deltas vs. family defaults
  std::map<std::string, double> tolerances;
  std::string csv_path, json_path;
  bool timing = false;  // when off, wall_time_ms is reported as 0 for byte-stable output
};

/// Line-oriented `key = value` format with [section] headers; sections
/// [family], [grid.u], [grid.v], [grid.z], [checks], [tolerances], [output];
/// `#` comments; duplicate and unknown keys are errors.
RunConfig parse_config(const std::string& text);

}  // namespace minsurf
