#include "minsurf/batch.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "minsurf/errors.hpp"
#include "minsurf/expr.hpp"
#include "minsurf/phase.hpp"

namespace minsurf {

namespace {

double axis_value(const GridAxis& ax, int i) {
  return ax.count < 2 ? ax.lo : ax.lo + (ax.hi - ax.lo) * i / (ax.count - 1);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

GridAxis periodic_axis(double period, int count) {
  // half-open [0, period): the last grid node stops one step short
  return {0.0, period * (count - 1) / count, count};
}

}  // namespace

Immersion build_immersion(const RunConfig& rc) {
  const bool wants_c = rc.c1 || rc.c2;
  if (rc.family == "example11") {
    if (wants_c) throw ConfigError(0, "c1/c2 only apply to family example12");
    Example11Params p = Example11Params::standard_basis();
    if (rc.basis) p.C = *rc.basis;
    return make_example11(p);
  }
  if (rc.family == "example12") {
    Example12Params p =
        Example12Params::standard_basis(rc.c1.value_or(0.1), rc.c2.value_or(1.0));
    if (rc.basis) p.C = *rc.basis;
    return make_example12(p);
  }
  if (rc.family == "cartan") {
    if (wants_c) throw ConfigError(0, "c1/c2 only apply to family example12");
    if (rc.basis) throw ConfigError(0, "basis overrides do not apply to family cartan");
    return make_cartan_tube();
  }
  // expr
  if (!(rc.u.min && rc.v.min && rc.z.min))
    throw ConfigError(0, "family 'expr' requires explicit [grid.*] min/max");
  std::array<ExprPtr, 5> components;
  for (int i = 0; i < 5; ++i) components[i] = parse(tokenize(rc.components[i]));
  auto padded = [](double lo, double hi) {
    const double pad = 0.1 * (hi - lo);
    return Interval{lo - pad, hi + pad};
  };
  Domain dom{padded(*rc.u.min, *rc.u.max), padded(*rc.v.min, *rc.v.max),
             padded(*rc.z.min, *rc.z.max), nullptr};
  return make_expr_immersion(components, rc.constants, dom);
}

GridSpec effective_grid(const RunConfig& rc, const Immersion& imm) {
  // the fallbacks below are already built with the resolved counts
  auto resolve = [](const AxisSpec& ax, const GridAxis& fallback) {
    GridAxis out = fallback;
    if (ax.min) {
      out.lo = *ax.min;
      out.hi = *ax.max;
    }
    return out;
  };

  GridSpec g;
  const int cu = rc.u.count.value_or(11), cv = rc.v.count.value_or(11),
            cz = rc.z.count.value_or(11);
  if (imm.label == "example11") {
    const double period = 2.0 * std::numbers::pi / std::sqrt(2.0);
    g.u = resolve(rc.u, periodic_axis(period, cu));
    g.v = resolve(rc.v, periodic_axis(period, cv));
    g.z = resolve(rc.z, {-2.0, 2.0, cz});
  } else if (imm.label == "example12") {
    const double period = 2.0 * std::numbers::pi;
    g.u = resolve(rc.u, periodic_axis(period, cu));
    const double lo = imm.domain.v_range.lo, hi = imm.domain.v_range.hi;
    const double w = hi - lo;
    g.v = resolve(rc.v, {lo + 0.01 * w, hi - 0.01 * w, cv});
    g.z = resolve(rc.z, {-2.0, 2.0, cz});
  } else if (imm.label == "cartan") {
    const double period = 2.0 * std::numbers::pi;
    g.u = resolve(rc.u, {0.3, std::numbers::pi - 0.3, cu});
    g.v = resolve(rc.v, periodic_axis(period, cv));
    g.z = resolve(rc.z, periodic_axis(period, cz));
  } else {
    g.u = {*rc.u.min, *rc.u.max, cu};
    g.v = {*rc.v.min, *rc.v.max, cv};
    g.z = {*rc.z.min, *rc.z.max, cz};
  }
  return g;
}

std::vector<std::string> effective_checks(const RunConfig& rc, const Immersion& imm) {
  std::set<std::string> enabled;
  for (const auto& name : known_checks())
    if (name != "frame_pde" && check_applies(name, imm)) enabled.insert(name);
  for (const auto& [name, on] : rc.checks) {
    if (on) {
      if (!check_applies(name, imm))
        throw ConfigError(0, "check '" + name + "' does not apply to family '" + imm.label + "'");
      enabled.insert(name);
    } else {
      enabled.erase(name);
    }
  }
  std::vector<std::string> out;
  for (const auto& name : known_checks())
    if (enabled.count(name)) out.push_back(name);
  return out;
}

std::string make_sample_csv(const Immersion& imm, const GridSpec& grid,
                            const DiffConfig& dcfg) {
  std::ostringstream out;
  out << "u,v,z,x1,x2,x3,x4,x5,lambda1,lambda2,lambda3,H,H2,K\n";
  for (int iu = 0; iu < grid.u.count; ++iu) {
    for (int iv = 0; iv < grid.v.count; ++iv) {
      for (int iz = 0; iz < grid.z.count; ++iz) {
        const Vec3 p(axis_value(grid.u, iu), axis_value(grid.v, iv), axis_value(grid.z, iz));
        try {
          const CurvatureSample c = curvature(imm, p, dcfg);
          out << fmt17(p[0]) << ',' << fmt17(p[1]) << ',' << fmt17(p[2]);
          for (int k = 0; k < 5; ++k) out << ',' << fmt17(c.jet.value[k]);
          for (int k = 0; k < 3; ++k) out << ',' << fmt17(c.lambda_sorted[k]);
          out << ',' << fmt17(c.H) << ',' << fmt17(c.H2) << ',' << fmt17(c.K) << '\n';
        } catch (const Error&) {
          // excluded points produce no row; the JSON report carries the count
        }
      }
    }
  }
  return out.str();
}

namespace {

nlohmann::json config_echo(const RunConfig& rc, const GridSpec& grid,
                           const std::vector<std::string>& checks) {
  nlohmann::json echo;
  echo["family"] = rc.family;
  if (rc.c1) echo["c1"] = *rc.c1;
  if (rc.c2) echo["c2"] = *rc.c2;
  echo["seed"] = rc.seed;
  auto ax = [](const GridAxis& a) {
    return nlohmann::json{{"min", a.lo}, {"max", a.hi}, {"count", a.count}};
  };
  echo["grid"] = {{"u", ax(grid.u)}, {"v", ax(grid.v)}, {"z", ax(grid.z)}};
  echo["checks"] = checks;
  echo["tolerances"] = rc.tolerances;
  if (!rc.csv_path.empty()) echo["csv"] = rc.csv_path;
  if (!rc.json_path.empty()) echo["json"] = rc.json_path;
  return echo;
}

nlohmann::json report_json(const RunConfig& rc, const GridSpec& grid,
                           const std::vector<std::string>& checks,
                           const ResidualReport& report, double wall_ms) {
  nlohmann::json j;
  j["config_echo"] = config_echo(rc, grid, checks);
  nlohmann::json per;
  for (const auto& [name, stat] : report.checks) {
    per[name] = {{"max_abs", stat.max_abs},
                 {"mean_abs", stat.mean_abs},
                 {"worst_point", {stat.worst_point[0], stat.worst_point[1], stat.worst_point[2]}},
                 {"tolerance", stat.tolerance},
                 {"pass", stat.pass}};
  }
  j["per_check"] = per;
  j["exclusions"] = {{"total_points", report.total_points},
                     {"excluded", report.excluded},
                     {"reasons", report.exclusion_reasons}};
  j["wall_time_ms"] = rc.timing ? wall_ms : 0.0;
  j["pass"] = report.pass;
  return j;
}

}  // namespace

VerifyResult run_verify(const RunConfig& rc, const DiffConfig& dcfg) {
  const Immersion imm = build_immersion(rc);
  const GridSpec grid = effective_grid(rc, imm);
  const std::vector<std::string> checks = effective_checks(rc, imm);

  const auto t0 = std::chrono::steady_clock::now();
  VerifyResult out;
  out.report = scan_grid(imm, grid, checks, rc.tolerances, dcfg);
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (!rc.csv_path.empty()) out.csv = make_sample_csv(imm, grid, dcfg);
  if (!rc.json_path.empty())
    out.json = report_json(rc, grid, checks, out.report, wall_ms).dump(2) + "\n";

  const bool budget_blown =
      out.report.total_points > 0 && out.report.excluded * 100 > out.report.total_points;
  out.exit_code = out.report.pass ? 0 : (budget_blown ? 3 : 1);
  return out;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

int do_verify(const std::string& config_path, bool timing) {
  RunConfig rc = parse_config(read_file(config_path));
  if (timing) rc.timing = true;
  const VerifyResult result = run_verify(rc);
  if (!rc.csv_path.empty()) write_file(rc.csv_path, result.csv);
  if (!rc.json_path.empty()) write_file(rc.json_path, result.json);
  for (const auto& [name, stat] : result.report.checks) {
    std::cerr << (stat.pass ? "pass" : "FAIL") << "  " << name << "  max " << stat.max_abs
              << "  tol " << stat.tolerance << '\n';
  }
  if (result.report.excluded > 0)
    std::cerr << "excluded " << result.report.excluded << " of " << result.report.total_points
              << " grid points\n";
  return result.exit_code;
}

int do_ode(double c1, double c2, int samples) {
  std::pair<double, double> iv;
  try {
    iv = validity_interval(c1, c2);
  } catch (const EmptyInterval&) {
    std::cerr << "empty validity interval (c2 <= 2*c1)\n";
    return 2;
  }
  PhaseSolution sol(c1, c2);
  std::cout << "validity interval: (" << fmt17(iv.first) << ", " << fmt17(iv.second) << ")\n";
  std::cout << "v,phi,g,h,residual\n";
  const double w = iv.second - iv.first;
  const double lo = iv.first + 0.02 * w, hi = iv.second - 0.02 * w;
  for (int i = 0; i < samples; ++i) {
    const double v = samples < 2 ? lo : lo + (hi - lo) * i / (samples - 1);
    const auto [g, h] = sol.gh(v);
    const double res =
        ode_residual_323([&](double vv) { return sol.gh(vv).first; }, v, c1, c2);
    std::cout << fmt17(v) << ',' << fmt17(sol.phi(v)) << ',' << fmt17(g) << ',' << fmt17(h)
              << ',' << fmt17(res) << '\n';
  }
  return 0;
}

int do_sample(const std::string& config_path, const std::string& out_path) {
  const RunConfig rc = parse_config(read_file(config_path));
  const Immersion imm = build_immersion(rc);
  const GridSpec grid = effective_grid(rc, imm);
  write_file(out_path, make_sample_csv(imm, grid, DiffConfig{}));
  return 0;
}

int do_report(const std::string& json_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(json_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(0, std::string("bad report file: ") + e.what());
  }
  if (j.contains("config_echo") && j["config_echo"].contains("family"))
    std::cout << "family: " << j["config_echo"]["family"].get<std::string>() << '\n';
  if (j.contains("per_check")) {
    for (const auto& [name, stat] : j["per_check"].items()) {
      std::cout << (stat.value("pass", false) ? "pass" : "FAIL") << "  " << name << "  max "
                << stat.value("max_abs", 0.0) << "  tol " << stat.value("tolerance", 0.0)
                << '\n';
    }
  }
  if (j.contains("exclusions"))
    std::cout << "excluded: " << j["exclusions"].value("excluded", 0) << " / "
              << j["exclusions"].value("total_points", 0) << '\n';
  if (j.contains("pass"))
    std::cout << "overall: " << (j["pass"].get<bool>() ? "pass" : "FAIL") << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"minimal-hypersurface curvature verification workbench"};
  app.require_subcommand(1);

  std::string config_path, out_path, report_path;
  double c1 = 0.1, c2 = 1.0;
  int samples = 9;
  bool timing = false;

  auto* verify = app.add_subcommand("verify", "run configured identity checks over a grid");
  verify->add_option("config", config_path, "run configuration file")->required();
  verify->add_flag("--timing", timing, "report real wall time in the JSON output");

  auto* ode = app.add_subcommand("ode", "print the phase function and amplitude table");
  ode->add_option("--c1", c1, "family parameter c1")->required();
  ode->add_option("--c2", c2, "family parameter c2")->required();
  ode->add_option("--samples", samples, "number of table rows");

  auto* sample = app.add_subcommand("sample", "write the immersed point cloud as CSV");
  sample->add_option("config", config_path, "run configuration file")->required();
  sample->add_option("--out", out_path, "output CSV path")->required();

  auto* report = app.add_subcommand("report", "pretty-print a previous JSON report");
  report->add_option("json", report_path, "JSON report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return do_verify(config_path, timing);
    if (ode->parsed()) return do_ode(c1, c2, samples);
    if (sample->parsed()) return do_sample(config_path, out_path);
    return do_report(report_path);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const LexError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const UnknownFunction& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const UnboundName& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const BadBasis& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const EmptyInterval& e) {
    std::cerr << "empty validity interval (c2 <= 2*c1): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 3;
  }
}

}  // namespace minsurf
