#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "minsurf/families.hpp"
#include "minsurf/kernel.hpp"
#include "minsurf/types.hpp"

namespace minsurf {

struct FundForms {
  Mat3 I;       // first fundamental form
  Mat3 II;      // second fundamental form
  Vec5 normal;  // unit normal y, first-nonzero-component-positive sign
  Jet2 jet;
};

/// I_ij = <x_i, x_j>, y = unit complement of (x, x_u, x_v, x_z),
/// II_ij = <x_ij, y>.
FundForms fundamental_forms(const Immersion& imm, const Vec3& p, const DiffConfig& cfg);

struct CurvatureSample {
  Vec3 point;
  Mat3 I, II, S;
  Vec5 normal;
  Jet2 jet;
  Vec3 lambda_sorted;  // descending
  Vec3 lambda;         // frame convention: (lambda, -lambda, 0)
  Mat3 frame;          // columns e1,e2,e3 in chart coordinates, matching lambda
  double H, H2, K;
  bool degenerate;
};

CurvatureSample curvature(const Immersion& imm, const Vec3& p, const DiffConfig& cfg);

struct AlphaSample {
  std::array<double, 9> alpha;  // alpha_1 ... alpha_9
  double lambda;                // the positive principal curvature
};

/// Connection coefficients of the principal frame.  When `reference_frame`
/// is given, the frame at p is first permutation/sign aligned to it so that
/// alpha fields sampled on a stencil share one orientation.
AlphaSample alpha_coefficients(const Immersion& imm, const Vec3& p, const DiffConfig& cfg,
                               const Mat3* reference_frame = nullptr);

using ResidualMap = std::map<std::string, double>;

/// Codazzi relations, their minimal-K=0 specializations and the coefficient
/// identities they force.
ResidualMap codazzi_residuals(const Immersion& imm, const Vec3& p, const DiffConfig& cfg);

/// Max frame-triple residual of the Gauss equation, Riemann tensor taken
/// from finite differences of the induced metric.
double gauss_residual(const Immersion& imm, const Vec3& p, const DiffConfig& cfg);

/// Second-order structure system satisfied by the first explicit family in
/// its defining chart; residual keys name the derivative being constrained
/// (xuu, xuv, ..., yu, yv, yz, xuuu).
ResidualMap structure_residuals_example11(const Immersion& imm, const Vec3& p,
                                          const DiffConfig& cfg);

/// Same for the second explicit family (plus the metric coefficient
/// identity, key "f_identity").
ResidualMap structure_residuals_example12(const Immersion& imm, const Vec3& p,
                                          const DiffConfig& cfg);

ResidualMap lie_bracket_residuals(const Immersion& imm, const Vec3& p, const DiffConfig& cfg);

/// The first-order PDE system for the alpha fields (nested FD; coarse).
ResidualMap frame_pde_residuals(const Immersion& imm, const Vec3& p, const DiffConfig& cfg);

/// max_a || y_a + sum_b S_ba x_b ||  (Weingarten relation per chart axis).
double weingarten_residual(const Immersion& imm, const Vec3& p, const DiffConfig& cfg);

// --- curvature tensor plumbing (also the flat-metric sanity hook) ---

using MetricFn = std::function<Mat3(const Vec3&)>;

/// christoffel[k](a,b) = Gamma^k_ab of the metric field at p.
std::array<Mat3, 3> christoffel_from_metric(const MetricFn& metric, const Vec3& p, double step);

/// riemann[a][b](d,c) = R^d_cab.
using RiemannTensor = std::array<std::array<Mat3, 3>, 3>;
RiemannTensor riemann_from_metric(const MetricFn& metric, const Vec3& p, double step_metric,
                                  double step_gamma);

struct CurvatureTensorSample {
  std::array<Mat3, 3> christoffel;
  RiemannTensor riemann;
};
CurvatureTensorSample curvature_tensor(const Immersion& imm, const Vec3& p,
                                       const DiffConfig& cfg);

// --- grid scans ---

struct GridAxis {
  double lo = 0.0, hi = 1.0;
  int count = 11;
};

struct GridSpec {
  GridAxis u, v, z;
};

struct CheckStat {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  Vec3 worst_point = Vec3::Zero();
  double tolerance = 0.0;
  bool pass = true;
  long samples = 0;
};

struct ResidualReport {
  std::map<std::string, CheckStat> checks;
  long total_points = 0;
  long excluded = 0;
  std::map<std::string, long> exclusion_reasons;
  bool pass = false;
};

const std::vector<std::string>& known_checks();
bool check_applies(const std::string& check, const Immersion& imm);
double default_tolerance(const std::string& name);

/// Runs the selected checks at every grid point (deterministic u-major
/// order).  Per-point numerical failures become counted exclusions; the
/// report fails if more than 1% of points are excluded or any check
/// exceeds its tolerance.
ResidualReport scan_grid(const Immersion& imm, const GridSpec& grid,
                         const std::vector<std::string>& checks,
                         const std::map<std::string, double>& tolerance_overrides,
                         const DiffConfig& cfg);

}  // namespace minsurf
