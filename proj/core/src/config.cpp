#include "minsurf/config.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <vector>

#include "minsurf/errors.hpp"
#include "minsurf/shape.hpp"

namespace minsurf {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_real(const std::string& value, int line, const std::string& key) {
  size_t pos = 0;
  double out;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "value of '" + key + "' is not a number: '" + value + "'");
  }
  if (pos != value.size() || !std::isfinite(out))
    throw ConfigError(line, "value of '" + key + "' is not a finite number: '" + value + "'");
  return out;
}

int parse_int(const std::string& value, int line, const std::string& key) {
  size_t pos = 0;
  long out;
  try {
    out = std::stol(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "value of '" + key + "' is not an integer: '" + value + "'");
  }
  if (pos != value.size())
    throw ConfigError(line, "value of '" + key + "' is not an integer: '" + value + "'");
  return static_cast<int>(out);
}

bool parse_switch(const std::string& value, int line, const std::string& key) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError(line, "value of '" + key + "' must be on or off: '" + value + "'");
}

Vec5 parse_vec5(const std::string& value, int line, const std::string& key) {
  std::vector<double> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(parse_real(trim(item), line, key));
  if (parts.size() != 5)
    throw ConfigError(line, "'" + key + "' needs 5 comma-separated components");
  Vec5 out;
  for (int i = 0; i < 5; ++i) out[i] = parts[i];
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;  // "section/key" for duplicate detection
  std::string section;
  bool have_basis[5] = {};
  std::array<Vec5, 5> basis;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "malformed section header: '" + s + "'");
      section = s.substr(1, s.size() - 2);
      static const std::set<std::string> known = {"family", "grid.u",     "grid.v", "grid.z",
                                                 "checks", "tolerances", "output"};
      if (!known.count(section)) throw ConfigError(line, "unknown section [" + section + "]");
      continue;
    }

    const size_t eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value': '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (section.empty()) throw ConfigError(line, "key '" + key + "' outside any section");
    if (!seen.insert(section + "/" + key).second)
      throw ConfigError(line, "duplicate key '" + key + "' in [" + section + "]");

    if (section == "family") {
      if (key == "name") {
        if (value != "example11" && value != "example12" && value != "cartan" &&
            value != "expr")
          throw ConfigError(line, "unknown family '" + value + "'");
        cfg.family = value;
      } else if (key == "c1") {
        cfg.c1 = parse_real(value, line, key);
      } else if (key == "c2") {
        cfg.c2 = parse_real(value, line, key);
      } else if (key == "seed") {
        cfg.seed = parse_int(value, line, key);
      } else if (key.size() == 2 && key[0] == 'C' && key[1] >= '1' && key[1] <= '5') {
        basis[key[1] - '1'] = parse_vec5(value, line, key);
        have_basis[key[1] - '1'] = true;
      } else if (key.size() == 2 && key[0] == 'x' && key[1] >= '1' && key[1] <= '5') {
        cfg.components[key[1] - '1'] = value;
      } else if (key.rfind("const.", 0) == 0 && key.size() > 6) {
        cfg.constants[key.substr(6)] = parse_real(value, line, key);
      } else {
        throw ConfigError(line, "unknown key '" + key + "' in [family]");
      }
    } else if (section.rfind("grid.", 0) == 0) {
      AxisSpec& ax = section == "grid.u" ? cfg.u : section == "grid.v" ? cfg.v : cfg.z;
      if (key == "min") ax.min = parse_real(value, line, key);
      else if (key == "max") ax.max = parse_real(value, line, key);
      else if (key == "count") {
        ax.count = parse_int(value, line, key);
        if (*ax.count < 2) throw ConfigError(line, "grid count must be >= 2");
      } else {
        throw ConfigError(line, "unknown key '" + key + "' in [" + section + "]");
      }
    } else if (section == "checks") {
      const auto& names = known_checks();
      if (std::find(names.begin(), names.end(), key) == names.end())
        throw ConfigError(line, "unknown check '" + key + "'");
      cfg.checks[key] = parse_switch(value, line, key);
    } else if (section == "tolerances") {
      const double tol = parse_real(value, line, key);
      if (tol <= 0.0) throw ConfigError(line, "tolerance must be positive");
      cfg.tolerances[key] = tol;
    } else {  // output
      if (key == "csv") cfg.csv_path = value;
      else if (key == "json") cfg.json_path = value;
      else if (key == "timing") cfg.timing = parse_switch(value, line, key);
      else throw ConfigError(line, "unknown key '" + key + "' in [output]");
    }
  }

  if (cfg.family.empty()) throw ConfigError(0, "missing required key 'name' in [family]");
  const int n_basis = std::count(have_basis, have_basis + 5, true);
  if (n_basis == 5) {
    cfg.basis = basis;
  } else if (n_basis != 0) {
    throw ConfigError(0, "basis override requires all of C1..C5");
  }
  for (const AxisSpec* ax : {&cfg.u, &cfg.v, &cfg.z}) {
    if (ax->min && ax->max && !(*ax->min < *ax->max))
      throw ConfigError(0, "grid min must be < max");
    if (static_cast<bool>(ax->min) != static_cast<bool>(ax->max))
      throw ConfigError(0, "grid min and max must be given together");
  }
  if (cfg.family == "expr") {
    for (int i = 0; i < 5; ++i)
      if (cfg.components[i].empty())
        throw ConfigError(0, "family 'expr' requires x1..x5 in [family]");
  }
  return cfg;
}

}  // namespace minsurf
