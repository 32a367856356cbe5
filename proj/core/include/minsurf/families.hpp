#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "minsurf/expr.hpp"
#include "minsurf/kernel.hpp"
#include "minsurf/phase.hpp"
#include "minsurf/types.hpp"

namespace minsurf {

struct Interval {
  double lo, hi;
  bool contains(double x) const { return x > lo && x < hi; }
};

struct Domain {
  Interval u_range, v_range, z_range;
  InsideFn extra;  // optional pointwise validity test

  bool contains(const Vec3& p) const {
    if (!u_range.contains(p[0]) || !v_range.contains(p[1]) || !z_range.contains(p[2]))
      return false;
    return !extra || extra(p);
  }
};

/// An evaluatable chart (u,v,z) -> R^5 with validity domain, optional exact
/// jets and family metadata used by the identity checks.
struct Immersion {
  std::string label;
  Domain domain;
  PointFn eval;
  std::function<Jet2(const Vec3&)> analytic_jet;              // may be empty
  std::function<double(const Vec3&)> expected_lambda1;        // may be empty
  std::map<std::string, double> meta;                         // c1, c2, ...
  std::shared_ptr<const PhaseSolution> phase;                 // example12 only

  InsideFn inside() const {
    return [dom = domain](const Vec3& p) { return dom.contains(p); };
  }
};

/// Jet through the analytic path when available and enabled, FD otherwise.
Jet2 jet_of(const Immersion& imm, const Vec3& p, const DiffConfig& cfg);

struct Example11Params {
  std::array<Vec5, 5> C;
  static Example11Params standard_basis();
};

struct Example12Params {
  double c1 = 0.1;
  double c2 = 1.0;
  std::array<Vec5, 5> C;
  static Example12Params standard_basis(double c1, double c2);
};

Immersion make_example11(const Example11Params& params);
Immersion make_example12(const Example12Params& params);

/// The Veronese embedding of the unit 2-sphere into S^4.
Vec5 veronese(double a, double b, double c);

struct CartanTubeConfig {
  double polar_margin = 0.15;  // keep the spherical chart away from the poles
};

/// The radius-pi/2 tube boundary over the Veronese surface, charted by
/// spherical angles (u,v) and the normal-circle angle z.
Immersion make_cartan_tube(const CartanTubeConfig& cfg = {});

/// Immersion built from five parsed component expressions.  The unit-norm
/// invariant is checked lazily at evaluation: beyond 1e-4 it is an error,
/// beyond 1e-8 a (counted) warning.
Immersion make_expr_immersion(const std::array<ExprPtr, 5>& components,
                              const std::map<std::string, double>& constants,
                              const Domain& domain);

}  // namespace minsurf
