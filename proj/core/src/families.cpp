#include "minsurf/families.hpp"

#include <atomic>
#include <cmath>
#include <iostream>

#include "minsurf/errors.hpp"

namespace minsurf {

Jet2 jet_of(const Immersion& imm, const Vec3& p, const DiffConfig& cfg) {
  if (cfg.use_analytic && imm.analytic_jet) {
    if (!imm.domain.contains(p)) throw DomainEscape("jet_of: point outside the validity domain");
    return imm.analytic_jet(p);
  }
  return jet(imm.eval, imm.inside(), p, cfg);
}

namespace {

void check_pairwise_orthogonal(const std::array<Vec5, 5>& C, double tol) {
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (std::abs(C[i].dot(C[j])) > tol)
        throw BadBasis("basis vectors C" + std::to_string(i + 1) + ", C" + std::to_string(j + 1) +
                       " are not orthogonal");
}

}  // namespace

Example11Params Example11Params::standard_basis() {
  Example11Params params;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 5; ++i) params.C[i].setZero();
  for (int i = 0; i < 4; ++i) params.C[i][i] = inv_sqrt2;
  params.C[4][4] = 1.0;
  return params;
}

Immersion make_example11(const Example11Params& params) {
  check_pairwise_orthogonal(params.C, 1e-12);
  for (int i = 0; i < 4; ++i)
    if (std::abs(params.C[i].dot(params.C[i]) - 0.5) > 1e-12)
      throw BadBasis("example11: <Ci,Ci> must be 1/2 for i=1..4");
  if (std::abs(params.C[4].dot(params.C[4]) - 1.0) > 1e-12)
    throw BadBasis("example11: <C5,C5> must be 1");

  const auto C = params.C;
  const double sqrt2 = std::sqrt(2.0);

  Immersion imm;
  imm.label = "example11";
  imm.domain = {{-10.0, 10.0}, {-10.0, 10.0}, {-5.0, 5.0}, nullptr};
  imm.eval = [C, sqrt2](const Vec3& p) -> Vec5 {
    const double cu = std::cos(sqrt2 * p[0]), su = std::sin(sqrt2 * p[0]);
    const double cv = std::cos(sqrt2 * p[1]), sv = std::sin(sqrt2 * p[1]);
    const double z = p[2];
    const double s = std::sqrt(1.0 + z * z);
    Vec5 out;
    for (int k = 0; k < 5; ++k)
      out[k] = (cu * C[0][k] + su * C[1][k] + cv * C[2][k] + sv * C[3][k] + z * C[4][k]) / s;
    return out;
  };
  imm.analytic_jet = [C, sqrt2](const Vec3& q) -> Jet2 {
    const double cu = std::cos(sqrt2 * q[0]), su = std::sin(sqrt2 * q[0]);
    const double cv = std::cos(sqrt2 * q[1]), sv = std::sin(sqrt2 * q[1]);
    const double z = q[2];
    const double s2 = 1.0 + z * z;
    const double s = std::sqrt(s2);
    const double s3 = s2 * s, s5 = s2 * s3;

    const Vec5 P = cu * C[0] + su * C[1];
    const Vec5 Pp = -su * C[0] + cu * C[1];
    const Vec5 Q = cv * C[2] + sv * C[3];
    const Vec5 Qp = -sv * C[2] + cv * C[3];

    Jet2 jet;
    jet.value = (P + Q + z * C[4]) / s;
    jet.d1[0] = sqrt2 * Pp / s;
    jet.d1[1] = sqrt2 * Qp / s;
    jet.d1[2] = -z * (P + Q) / s3 + C[4] / s3;
    jet.d2[0] = -2.0 * P / s;                       // uu
    jet.d2[1] = Vec5::Zero();                       // uv
    jet.d2[2] = -sqrt2 * z * Pp / s3;               // uz
    jet.d2[3] = -2.0 * Q / s;                       // vv
    jet.d2[4] = -sqrt2 * z * Qp / s3;               // vz
    jet.d2[5] = (2.0 * z * z - 1.0) * (P + Q) / s5 - 3.0 * z * C[4] / s5;  // zz
    return jet;
  };
  imm.expected_lambda1 = [](const Vec3& p) { return std::sqrt(p[2] * p[2] + 1.0); };
  return imm;
}

Example12Params Example12Params::standard_basis(double c1, double c2) {
  Example12Params params;
  params.c1 = c1;
  params.c2 = c2;
  for (int i = 0; i < 5; ++i) {
    params.C[i].setZero();
    params.C[i][i] = 1.0;
  }
  return params;
}

Immersion make_example12(const Example12Params& params) {
  if (!(params.c1 > 0.0) || !(params.c2 > 0.0))
    throw BadBasis("example12: c1 and c2 must be positive");
  check_pairwise_orthogonal(params.C, 1e-12);
  for (int i = 0; i < 5; ++i)
    if (std::abs(params.C[i].dot(params.C[i]) - 1.0) > 1e-12)
      throw BadBasis("example12: basis must be orthonormal");

  auto phase = std::make_shared<PhaseSolution>(params.c1, params.c2);  // EmptyInterval on bad c
  const double width = phase->v_max() - phase->v_min();
  const double v_lo = phase->v_min() + 0.01 * width;
  const double v_hi = phase->v_max() - 0.01 * width;

  const auto C = params.C;
  const double c1 = params.c1, c2 = params.c2;

  Immersion imm;
  imm.label = "example12";
  imm.domain = {{-10.0, 10.0}, {v_lo, v_hi}, {-5.0, 5.0}, nullptr};
  imm.phase = phase;
  imm.meta["c1"] = c1;
  imm.meta["c2"] = c2;
  imm.eval = [C, c2, phase](const Vec3& p) -> Vec5 {
    const double u = p[0], v = p[1], z = p[2];
    const auto [g, h] = phase->gh(v);
    const double w = std::exp(-v) / std::sqrt(c2);
    const double s = std::sqrt(1.0 + z * z);
    return (w * (std::cos(u) * C[0] + std::sin(u) * C[1]) + z * C[2] + g * C[3] + h * C[4]) / s;
  };
  imm.analytic_jet = [C, c1, c2, phase](const Vec3& q) -> Jet2 {
    const double u = q[0], v = q[1], z = q[2];
    const double cu = std::cos(u), su = std::sin(u);
    const double s2 = 1.0 + z * z;
    const double s = std::sqrt(s2);
    const double s3 = s2 * s, s5 = s2 * s3;
    const double w = std::exp(-v) / std::sqrt(c2);

    const double p = phase->phi(v);
    const double cp = std::cos(p), sp = std::sin(p);
    const double dp = phi_prime(v, c1, c2);
    const double e2 = std::exp(2.0 * v);
    const double em2 = std::exp(-2.0 * v);
    const double r = std::sqrt(c2 - em2);
    const double rp = em2 / r;
    const double inv_sqrt_c2 = 1.0 / std::sqrt(c2);

    const double g = r * cp * inv_sqrt_c2;
    const double h = r * sp * inv_sqrt_c2;
    const double gp = (rp * cp - r * sp * dp) * inv_sqrt_c2;
    const double hp = (rp * sp + r * cp * dp) * inv_sqrt_c2;
    // Second derivatives through the ODE the pair solves.
    const double d2 = c2 * e2 - 1.0 - c1 * c1 * e2 * e2;
    const double d1c = 1.0 - c1 * c1 * e2 * e2;
    const double gpp = -(d1c * gp + 2.0 * g) / d2;
    const double hpp = -(d1c * hp + 2.0 * h) / d2;

    const Vec5 P = cu * C[0] + su * C[1];
    const Vec5 Pp = -su * C[0] + cu * C[1];

    Jet2 jet;
    jet.value = (w * P + z * C[2] + g * C[3] + h * C[4]) / s;
    jet.d1[0] = w * Pp / s;
    jet.d1[1] = -w * P / s + gp * C[3] / s + hp * C[4] / s;
    jet.d1[2] = -z * (w * P + g * C[3] + h * C[4]) / s3 + C[2] / s3;
    jet.d2[0] = -w * P / s;                                                  // uu
    jet.d2[1] = -w * Pp / s;                                                 // uv
    jet.d2[2] = -z * w * Pp / s3;                                            // uz
    jet.d2[3] = w * P / s + gpp * C[3] / s + hpp * C[4] / s;                 // vv
    jet.d2[4] = z * w * P / s3 - z * gp * C[3] / s3 - z * hp * C[4] / s3;    // vz
    jet.d2[5] = (2.0 * z * z - 1.0) * (w * P + g * C[3] + h * C[4]) / s5 -
                3.0 * z * C[2] / s5;                                         // zz
    return jet;
  };
  imm.expected_lambda1 = [c1](const Vec3& p) {
    return c1 * std::exp(2.0 * p[1]) * std::sqrt(p[2] * p[2] + 1.0);
  };
  return imm;
}

namespace {

// Identification of traceless symmetric 3x3 matrices with R^5, matching the
// Veronese component formulas; <phi(M), phi(N)> = (3/2) tr(MN).
Vec5 traceless_to_r5(const Mat3& M) {
  const double sqrt3 = std::sqrt(3.0);
  Vec5 out;
  out[0] = sqrt3 * M(1, 2);
  out[1] = sqrt3 * M(0, 2);
  out[2] = sqrt3 * M(0, 1);
  out[3] = 0.5 * sqrt3 * (M(0, 0) - M(1, 1));
  out[4] = 0.5 * (M(0, 0) + M(1, 1) - 2.0 * M(2, 2));
  return out;
}

}  // namespace

Vec5 veronese(double a, double b, double c) {
  if (std::abs(a * a + b * b + c * c - 1.0) > 1e-12)
    throw NotOnSphere("veronese: input is not on the unit 2-sphere");
  const double sqrt3 = std::sqrt(3.0);
  Vec5 out;
  out[0] = sqrt3 * b * c;
  out[1] = sqrt3 * a * c;
  out[2] = sqrt3 * a * b;
  out[3] = 0.5 * sqrt3 * (a * a - b * b);
  out[4] = 0.5 * (a * a + b * b - 2.0 * c * c);
  return out;
}

Immersion make_cartan_tube(const CartanTubeConfig& cfg) {
  Immersion imm;
  imm.label = "cartan";
  imm.domain = {{cfg.polar_margin, M_PI - cfg.polar_margin}, {-10.0, 10.0}, {-10.0, 10.0},
                nullptr};
  imm.eval = [](const Vec3& q) -> Vec5 {
    const double u = q[0], v = q[1], z = q[2];
    if (std::abs(std::sin(u)) < 1e-6)
      throw PoleSingularity("cartan tube: chart pole (|sin u| < 1e-6)");
    const double cu = std::cos(u), su = std::sin(u);
    const double cv = std::cos(v), sv = std::sin(v);

    // Spherical chart point and an orthonormal tangent basis of S^2.
    const Eigen::Vector3d a(su * cv, su * sv, cu);
    const Eigen::Vector3d t1(cu * cv, cu * sv, -su);
    const Eigen::Vector3d t2(-sv, cv, 0.0);

    // Orthonormal frame of the Veronese normal bundle inside T S^4.
    const Mat3 m1 = t1 * t1.transpose() - t2 * t2.transpose();
    const Mat3 m2 = t1 * t2.transpose() + t2 * t1.transpose();
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    const Vec5 xi1 = traceless_to_r5(m1) * inv_sqrt3;
    const Vec5 xi2 = traceless_to_r5(m2) * inv_sqrt3;
    return std::cos(z) * xi1 + std::sin(z) * xi2;
  };
  // Exact jet: the chart frame a, t1, t2 differentiates back into itself
  // (du t1 = -a, dv t1 = cos u t2, du t2 = 0, dv t2 = -sin u a - cos u t1),
  // and the matrix model is linear, so the product rule gives every partial
  // in closed form.
  imm.analytic_jet = [](const Vec3& q) -> Jet2 {
    const double u = q[0], v = q[1], z = q[2];
    if (std::abs(std::sin(u)) < 1e-6)
      throw PoleSingularity("cartan tube: chart pole (|sin u| < 1e-6)");
    const double cu = std::cos(u), su = std::sin(u);
    const double cv = std::cos(v), sv = std::sin(v);
    const double cz = std::cos(z), sz = std::sin(z);

    using V3 = Eigen::Vector3d;
    const V3 a(su * cv, su * sv, cu);
    const V3 t1(cu * cv, cu * sv, -su);
    const V3 t2(-sv, cv, 0.0);

    const V3 du_t1 = -a, dv_t1 = cu * t2;
    const V3 du_t2 = V3::Zero(), dv_t2 = -su * a - cu * t1;
    const V3 duu_t1 = -t1, duv_t1 = -su * t2, dvv_t1 = cu * dv_t2;
    const V3 duu_t2 = V3::Zero(), duv_t2 = V3::Zero(), dvv_t2 = -t2;

    auto sym = [](const V3& x, const V3& y) -> Mat3 {
      return x * y.transpose() + y * x.transpose();
    };
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    auto phi = [&](const Mat3& M) -> Vec5 { return traceless_to_r5(M) * inv_sqrt3; };

    const Vec5 xi1 = phi(0.5 * (sym(t1, t1) - sym(t2, t2)));
    const Vec5 xi1_u = phi(sym(du_t1, t1) - sym(du_t2, t2));
    const Vec5 xi1_v = phi(sym(dv_t1, t1) - sym(dv_t2, t2));
    const Vec5 xi1_uu = phi(sym(duu_t1, t1) + sym(du_t1, du_t1) -
                            sym(duu_t2, t2) - sym(du_t2, du_t2));
    const Vec5 xi1_uv = phi(sym(duv_t1, t1) + sym(du_t1, dv_t1) -
                            sym(duv_t2, t2) - sym(du_t2, dv_t2));
    const Vec5 xi1_vv = phi(sym(dvv_t1, t1) + sym(dv_t1, dv_t1) -
                            sym(dvv_t2, t2) - sym(dv_t2, dv_t2));

    const Vec5 xi2 = phi(sym(t1, t2));
    const Vec5 xi2_u = phi(sym(du_t1, t2) + sym(t1, du_t2));
    const Vec5 xi2_v = phi(sym(dv_t1, t2) + sym(t1, dv_t2));
    const Vec5 xi2_uu = phi(sym(duu_t1, t2) + 2.0 * sym(du_t1, du_t2) + sym(t1, duu_t2));
    const Vec5 xi2_uv =
        phi(sym(duv_t1, t2) + sym(du_t1, dv_t2) + sym(dv_t1, du_t2) + sym(t1, duv_t2));
    const Vec5 xi2_vv = phi(sym(dvv_t1, t2) + 2.0 * sym(dv_t1, dv_t2) + sym(t1, dvv_t2));

    Jet2 j;
    j.value = cz * xi1 + sz * xi2;
    j.d1[0] = cz * xi1_u + sz * xi2_u;
    j.d1[1] = cz * xi1_v + sz * xi2_v;
    j.d1[2] = -sz * xi1 + cz * xi2;
    j.d2[0] = cz * xi1_uu + sz * xi2_uu;
    j.d2[1] = cz * xi1_uv + sz * xi2_uv;
    j.d2[2] = -sz * xi1_u + cz * xi2_u;
    j.d2[3] = cz * xi1_vv + sz * xi2_vv;
    j.d2[4] = -sz * xi1_v + cz * xi2_v;
    j.d2[5] = -j.value;
    return j;
  };
  imm.expected_lambda1 = [](const Vec3&) { return std::sqrt(3.0); };
  return imm;
}

Immersion make_expr_immersion(const std::array<ExprPtr, 5>& components,
                              const std::map<std::string, double>& constants,
                              const Domain& domain) {
  Env env = Env::with_defaults();
  for (const auto& [name, value] : constants) env.constants[name] = value;

  auto warned = std::make_shared<std::atomic<bool>>(false);
  Immersion imm;
  imm.label = "expr";
  imm.domain = domain;
  imm.eval = [components, env, warned](const Vec3& p) mutable -> Vec5 {
    Env local = env;
    local.u = p[0];
    local.v = p[1];
    local.z = p[2];
    Vec5 out;
    for (int k = 0; k < 5; ++k) out[k] = eval(components[k], local);
    const double drift = std::abs(out.norm() - 1.0);
    if (drift > 1e-4)
      throw NotOnSphere("expression immersion leaves the unit sphere (||x|-1| = " +
                        std::to_string(drift) + ")");
    if (drift > 1e-8 && !warned->exchange(true))
      std::cerr << "warning: expression immersion drifts off the unit sphere (||x|-1| = "
                << drift << ")\n";
    return out;
  };
  return imm;
}

}  // namespace minsurf
