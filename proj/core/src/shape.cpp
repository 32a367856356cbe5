#include "minsurf/shape.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "minsurf/errors.hpp"

namespace minsurf {

namespace {

void canonicalize_normal_sign(Vec5& y) {
  for (int i = 0; i < 5; ++i) {
    if (std::abs(y[i]) > 1e-8) {
      if (y[i] < 0.0) y = -y;
      return;
    }
  }
}

/// Re-orients a curvature sample to a reference normal: when the canonical
/// normal sign flips across the stencil (it is only canonical pointwise),
/// II and the principal curvatures flip with it.
void orient_to_normal(CurvatureSample& c, const Vec5& y_ref) {
  if (c.normal.dot(y_ref) >= 0.0) return;
  c.normal = -c.normal;
  c.II = -c.II;
  c.S = -c.S;
  c.lambda = -c.lambda;
  c.lambda_sorted = -c.lambda_sorted;  // no longer sorted; order tracked by lambda
  c.H = -c.H;
  c.K = -c.K;
}

Mat3 metric_at(const Immersion& imm, const Vec3& q, const DiffConfig& cfg) {
  const Jet2 j = jet_of(imm, q, cfg);
  Mat3 I;
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) I(a, b) = I(b, a) = j.d1[a].dot(j.d1[b]);
  return I;
}

/// Permutation/sign alignment of a candidate frame against a reference,
/// greedy on normalized I-inner products with a 0.9 floor.
void align_frame(const Mat3& ref, const Mat3& I_ref, Mat3& frame, Vec3* lambda) {
  Mat3 score;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double num = frame.col(i).dot(I_ref * ref.col(j));
      const double den = std::sqrt(frame.col(i).dot(I_ref * frame.col(i)) *
                                   ref.col(j).dot(I_ref * ref.col(j)));
      score(i, j) = num / den;
    }
  }
  bool used_i[3] = {false, false, false}, used_j[3] = {false, false, false};
  int match[3] = {-1, -1, -1};  // ref column j -> candidate column i
  double sign[3] = {1, 1, 1};
  for (int pick = 0; pick < 3; ++pick) {
    double best = -1.0;
    int bi = -1, bj = -1;
    for (int i = 0; i < 3; ++i) {
      if (used_i[i]) continue;
      for (int j = 0; j < 3; ++j) {
        if (used_j[j]) continue;
        if (std::abs(score(i, j)) > best) {
          best = std::abs(score(i, j));
          bi = i;
          bj = j;
        }
      }
    }
    if (best <= 0.9)
      throw FrameAlignmentFailure("frame alignment: best pairing dot product <= 0.9");
    used_i[bi] = used_j[bj] = true;
    match[bj] = bi;
    sign[bj] = score(bi, bj) >= 0.0 ? 1.0 : -1.0;
  }
  Mat3 out;
  Vec3 lam_out = Vec3::Zero();
  for (int j = 0; j < 3; ++j) {
    out.col(j) = sign[j] * frame.col(match[j]);
    if (lambda) lam_out[j] = (*lambda)[match[j]];
  }
  frame = out;
  if (lambda) *lambda = lam_out;
}

}  // namespace

FundForms fundamental_forms(const Immersion& imm, const Vec3& p, const DiffConfig& cfg) {
  FundForms out;
  out.jet = jet_of(imm, p, cfg);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) out.I(a, b) = out.I(b, a) = out.jet.d1[a].dot(out.jet.d1[b]);
  out.normal = normal_complement(out.jet.value, out.jet.d1[0], out.jet.d1[1], out.jet.d1[2]);
  canonicalize_normal_sign(out.normal);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      out.II(a, b) = out.II(b, a) = out.jet.second(a, b).dot(out.normal);
  return out;
}

CurvatureSample curvature(const Immersion& imm, const Vec3& p, const DiffConfig& cfg) {
  const FundForms ff = fundamental_forms(imm, p, cfg);
  const Eig3 eig = generalized_sym_eig3(ff.II, ff.I, cfg.degenerate_gap);

  CurvatureSample s;
  s.point = p;
  s.I = ff.I;
  s.II = ff.II;
  s.S = ff.I.llt().solve(ff.II);
  s.normal = ff.normal;
  s.jet = ff.jet;
  s.lambda_sorted = eig.lambda;
  // Frame convention: e1 <-> largest, e2 <-> most negative, e3 <-> middle
  // (the near-zero one for a (lambda, 0, -lambda) spectrum).
  s.lambda = Vec3(eig.lambda[0], eig.lambda[2], eig.lambda[1]);
  s.frame.col(0) = eig.vectors.col(0);
  s.frame.col(1) = eig.vectors.col(2);
  s.frame.col(2) = eig.vectors.col(1);
  s.H = (eig.lambda[0] + eig.lambda[1] + eig.lambda[2]) / 3.0;
  s.H2 = (eig.lambda[0] * eig.lambda[1] + eig.lambda[0] * eig.lambda[2] +
          eig.lambda[1] * eig.lambda[2]) /
         3.0;
  s.K = eig.lambda[0] * eig.lambda[1] * eig.lambda[2];
  s.degenerate = eig.degenerate;
  return s;
}

namespace {

/// Center curvature sample plus everything the frame-based identities need:
/// Christoffel symbols, partials of the aligned frame, of the relabeled
/// principal curvatures and of the sign-aligned normal.
struct FrameCtx {
  CurvatureSample c;
  std::array<Mat3, 3> gamma;    // gamma[k](a,b) = Gamma^k_ab
  std::array<Mat3, 3> dframe;   // dframe[a] = d(frame)/d chart axis a
  std::array<Vec3, 3> dlambda;  // dlambda[a][j] = d lambda_j / d axis a
  std::array<Vec5, 3> dnormal;

  Vec3 e(int i) const { return c.frame.col(i); }
  double ip(const Vec3& w1, const Vec3& w2) const { return w1.dot(c.I * w2); }
  double inorm(const Vec3& w) const { return std::sqrt(std::max(0.0, w.dot(c.I * w))); }

  /// Levi-Civita covariant derivative of frame field e_j along e_i, in
  /// chart components.
  Vec3 cov(int i, int j) const {
    const Vec3 ei = e(i), ej = e(j);
    Vec3 out = Vec3::Zero();
    for (int a = 0; a < 3; ++a) out += ei[a] * dframe[a].col(j);
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out[k] += ei[a] * ej[b] * gamma[k](a, b);
    return out;
  }

  double dir_lambda(int i, int j) const {
    double out = 0.0;
    for (int a = 0; a < 3; ++a) out += e(i)[a] * dlambda[a][j];
    return out;
  }

  std::array<double, 9> alphas() const {
    std::array<double, 9> a{};
    a[0] = ip(cov(0, 0), e(1));   // alpha_1
    a[1] = ip(cov(0, 0), e(2));   // alpha_2
    a[2] = ip(cov(0, 1), e(2));   // alpha_3
    a[3] = -ip(cov(1, 0), e(1));  // alpha_4
    a[4] = ip(cov(1, 1), e(2));   // alpha_5
    a[5] = ip(cov(1, 0), e(2));   // alpha_6
    a[6] = -ip(cov(2, 0), e(2));  // alpha_7
    a[7] = -ip(cov(2, 1), e(2));  // alpha_8
    a[8] = ip(cov(2, 0), e(1));   // alpha_9
    return a;
  }
};

FrameCtx frame_ctx(const Immersion& imm, const Vec3& p, const DiffConfig& cfg,
                   const Mat3* reference_frame) {
  FrameCtx ctx;
  ctx.c = curvature(imm, p, cfg);
  if (ctx.c.degenerate)
    throw DegeneratePencil("frame analysis requires a separated principal spectrum");

  // The +/-lambda eigenvector pairing depends on the normal sign, which is
  // only pointwise-canonical.  The frame convention ties e1 to the u axis of
  // the chart, so when the -lambda direction hugs du better than the +lambda
  // one, flip the normal and swap the pair.
  {
    Mat3& f = ctx.c.frame;
    auto cos_u = [&](const Vec3& w) {
      return std::abs((ctx.c.I * w)[0]) / std::sqrt(w.dot(ctx.c.I * w) * ctx.c.I(0, 0));
    };
    if (cos_u(f.col(1)) > cos_u(f.col(0))) {
      orient_to_normal(ctx.c, -ctx.c.normal);
      f.col(0).swap(f.col(1));
      std::swap(ctx.c.lambda[0], ctx.c.lambda[1]);
      std::sort(ctx.c.lambda_sorted.data(), ctx.c.lambda_sorted.data() + 3,
                std::greater<double>());
    }
  }

  if (reference_frame) align_frame(*reference_frame, ctx.c.I, ctx.c.frame, &ctx.c.lambda);

  auto metric = [&](const Vec3& q) { return metric_at(imm, q, cfg); };
  ctx.gamma = christoffel_from_metric(metric, p, cfg.base_step);

  for (int a = 0; a < 3; ++a) {
    const double h = 1e-3 * std::max(1.0, std::abs(p[a]));
    Vec3 qp = p, qm = p;
    qp[a] += h;
    qm[a] -= h;
    CurvatureSample cp = curvature(imm, qp, cfg);
    CurvatureSample cm = curvature(imm, qm, cfg);
    orient_to_normal(cp, ctx.c.normal);
    orient_to_normal(cm, ctx.c.normal);
    align_frame(ctx.c.frame, ctx.c.I, cp.frame, &cp.lambda);
    align_frame(ctx.c.frame, ctx.c.I, cm.frame, &cm.lambda);
    ctx.dframe[a] = (cp.frame - cm.frame) / (2.0 * h);
    ctx.dlambda[a] = (cp.lambda - cm.lambda) / (2.0 * h);
    ctx.dnormal[a] = (cp.normal - cm.normal) / (2.0 * h);
  }
  return ctx;
}

}  // namespace

AlphaSample alpha_coefficients(const Immersion& imm, const Vec3& p, const DiffConfig& cfg,
                               const Mat3* reference_frame) {
  const FrameCtx ctx = frame_ctx(imm, p, cfg, reference_frame);
  AlphaSample out;
  out.alpha = ctx.alphas();
  out.lambda = ctx.c.lambda[0];
  return out;
}

ResidualMap codazzi_residuals(const Immersion& imm, const Vec3& p, const DiffConfig& cfg) {
  const FrameCtx ctx = frame_ctx(imm, p, cfg, nullptr);
  const auto a = ctx.alphas();
  const double l1 = ctx.c.lambda[0], l2 = ctx.c.lambda[1], l3 = ctx.c.lambda[2];
  const double lam = l1;

  ResidualMap r;
  r["e1_lambda2"] = std::abs(ctx.dir_lambda(0, 1) - a[3] * (l2 - l1));
  r["e1_lambda3"] = std::abs(ctx.dir_lambda(0, 2) - a[6] * (l3 - l1));
  r["e2_lambda1"] = std::abs(ctx.dir_lambda(1, 0) - a[0] * (l1 - l2));
  r["e2_lambda3"] = std::abs(ctx.dir_lambda(1, 2) - a[7] * (l3 - l2));
  r["e3_lambda1"] = std::abs(ctx.dir_lambda(2, 0) - a[1] * (l1 - l3));
  r["e3_lambda2"] = std::abs(ctx.dir_lambda(2, 1) - a[4] * (l2 - l3));
  r["chain_9_3"] = std::abs(a[8] * (l1 - l2) - a[2] * (l2 - l3));
  r["chain_3_6"] = std::abs(a[2] * (l2 - l3) - a[5] * (l1 - l3));
  // minimal, K == 0 specializations
  r["min_e1_lambda"] = std::abs(ctx.dir_lambda(0, 0) - 2.0 * a[3] * lam);
  r["min_e2_lambda"] = std::abs(ctx.dir_lambda(1, 0) - 2.0 * a[0] * lam);
  r["min_e3_lambda"] = std::abs(ctx.dir_lambda(2, 0) - a[1] * lam);
  r["alpha5_minus_alpha2"] = std::abs(a[4] - a[1]);
  r["two_alpha9_plus_alpha3"] = std::abs(2.0 * a[8] + a[2]);
  r["alpha3_plus_alpha6"] = std::abs(a[2] + a[5]);
  r["alpha7"] = std::abs(a[6]);
  r["alpha8"] = std::abs(a[7]);
  return r;
}

std::array<Mat3, 3> christoffel_from_metric(const MetricFn& metric, const Vec3& p,
                                            double step) {
  const Mat3 I = metric(p);
  std::array<Mat3, 3> dI;
  for (int a = 0; a < 3; ++a) {
    const double h = step * std::max(1.0, std::abs(p[a]));
    Vec3 qp = p, qm = p;
    qp[a] += h;
    qm[a] -= h;
    dI[a] = (metric(qp) - metric(qm)) / (2.0 * h);
  }
  const Mat3 I_inv = I.inverse();
  std::array<Mat3, 3> gamma;
  for (int k = 0; k < 3; ++k) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double sum = 0.0;
        for (int l = 0; l < 3; ++l)
          sum += I_inv(k, l) * (dI[a](b, l) + dI[b](a, l) - dI[l](a, b));
        gamma[k](a, b) = 0.5 * sum;
      }
    }
  }
  return gamma;
}

RiemannTensor riemann_from_metric(const MetricFn& metric, const Vec3& p, double step_metric,
                                  double step_gamma) {
  const std::array<Mat3, 3> g0 = christoffel_from_metric(metric, p, step_metric);
  std::array<std::array<Mat3, 3>, 3> dgamma;  // dgamma[a][k](b,c) = d_a Gamma^k_bc
  for (int a = 0; a < 3; ++a) {
    const double h = step_gamma * std::max(1.0, std::abs(p[a]));
    Vec3 qp = p, qm = p;
    qp[a] += h;
    qm[a] -= h;
    const auto gp = christoffel_from_metric(metric, qp, step_metric);
    const auto gm = christoffel_from_metric(metric, qm, step_metric);
    for (int k = 0; k < 3; ++k) dgamma[a][k] = (gp[k] - gm[k]) / (2.0 * h);
  }
  RiemannTensor R;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int d = 0; d < 3; ++d) {
        for (int c = 0; c < 3; ++c) {
          double val = dgamma[a][d](b, c) - dgamma[b][d](a, c);
          for (int m = 0; m < 3; ++m)
            val += g0[d](a, m) * g0[m](b, c) - g0[d](b, m) * g0[m](a, c);
          R[a][b](d, c) = val;
        }
      }
    }
  }
  return R;
}

CurvatureTensorSample curvature_tensor(const Immersion& imm, const Vec3& p,
                                       const DiffConfig& cfg) {
  auto metric = [&](const Vec3& q) { return metric_at(imm, q, cfg); };
  CurvatureTensorSample out;
  out.christoffel = christoffel_from_metric(metric, p, cfg.base_step);
  out.riemann = riemann_from_metric(metric, p, cfg.base_step, 10.0 * cfg.base_step);
  return out;
}

double gauss_residual(const Immersion& imm, const Vec3& p, const DiffConfig& cfg) {
  const CurvatureSample c = curvature(imm, p, cfg);
  auto metric = [&](const Vec3& q) { return metric_at(imm, q, cfg); };
  const RiemannTensor R = riemann_from_metric(metric, p, cfg.base_step, 10.0 * cfg.base_step);

  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        const Vec3 ei = c.frame.col(i), ej = c.frame.col(j), ek = c.frame.col(k);
        Vec3 lhs = Vec3::Zero();
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            for (int cc = 0; cc < 3; ++cc)
              for (int d = 0; d < 3; ++d)
                lhs[d] += ei[a] * ej[b] * ek[cc] * R[a][b](d, cc);
        const double li = c.lambda[i], lj = c.lambda[j];
        const double factor = 1.0 + li * lj;
        Vec3 rhs = Vec3::Zero();
        if (k == j) rhs += factor * ei;
        if (k == i) rhs -= factor * ej;
        const Vec3 diff = lhs - rhs;
        worst = std::max(worst, std::sqrt(std::max(0.0, diff.dot(c.I * diff))));
      }
    }
  }
  return worst;
}

namespace {

/// Normal field around p with signs aligned to a reference vector.
std::array<Vec5, 3> normal_partials(const Immersion& imm, const Vec3& p, const DiffConfig& cfg,
                                    const Vec5& reference) {
  std::array<Vec5, 3> out;
  for (int a = 0; a < 3; ++a) {
    const double h = cfg.base_step * std::max(1.0, std::abs(p[a]));
    Vec3 qp = p, qm = p;
    qp[a] += h;
    qm[a] -= h;
    Vec5 yp = fundamental_forms(imm, qp, cfg).normal;
    Vec5 ym = fundamental_forms(imm, qm, cfg).normal;
    if (yp.dot(reference) < 0.0) yp = -yp;
    if (ym.dot(reference) < 0.0) ym = -ym;
    out[a] = (yp - ym) / (2.0 * h);
  }
  return out;
}

}  // namespace

double weingarten_residual(const Immersion& imm, const Vec3& p, const DiffConfig& cfg) {
  const FundForms ff = fundamental_forms(imm, p, cfg);
  const Mat3 S = ff.I.llt().solve(ff.II);
  const auto dy = normal_partials(imm, p, cfg, ff.normal);
  double worst = 0.0;
  for (int a = 0; a < 3; ++a) {
    Vec5 res = dy[a];
    for (int b = 0; b < 3; ++b) res += S(b, a) * ff.jet.d1[b];
    worst = std::max(worst, res.norm());
  }
  return worst;
}

ResidualMap structure_residuals_example11(const Immersion& imm, const Vec3& p,
                                          const DiffConfig& cfg) {
  const Jet2 j = jet(imm.eval, imm.inside(), p, cfg);  // the FD jet, per contract
  const double z = p[2];
  const double s2 = z * z + 1.0;
  const double lam = std::sqrt(s2);
  const Vec5& x = j.value;
  const Vec5 &xu = j.d1[0], &xv = j.d1[1], &xz = j.d1[2];

  Vec5 y = normal_complement(x, xu, xv, xz);
  canonicalize_normal_sign(y);
  // The x_uu relation fixes the orientation of y used by the system.
  auto res_xuu = [&](const Vec5& yy) {
    return (s2 * j.d2[0] - z * s2 * xz - lam * yy + x).norm();
  };
  if (res_xuu(-y) < res_xuu(y)) y = -y;

  ResidualMap r;
  r["xuu"] = res_xuu(y);
  r["xuv"] = j.d2[1].norm();
  r["xuz"] = (j.d2[2] + z / s2 * xu).norm();
  r["xvv"] = (s2 * j.d2[3] - z * s2 * xz + lam * y + x).norm();
  r["xvz"] = (j.d2[4] + z / s2 * xv).norm();
  r["xzz"] = (s2 * s2 * j.d2[5] + 2.0 * z * s2 * xz + x).norm();
  const auto dy = normal_partials(imm, p, cfg, y);
  r["yu"] = (dy[0] + lam * xu).norm();
  r["yv"] = (dy[1] - lam * xv).norm();
  r["yz"] = dy[2].norm();
  const Vec5 xuuu = third_partial(imm.eval, imm.inside(), p, 0, 1e-3);
  r["xuuu"] = (xuuu + 2.0 * xu).norm();
  return r;
}

ResidualMap structure_residuals_example12(const Immersion& imm, const Vec3& p,
                                          const DiffConfig& cfg) {
  const auto c1_it = imm.meta.find("c1");
  const auto c2_it = imm.meta.find("c2");
  if (c1_it == imm.meta.end() || c2_it == imm.meta.end())
    throw Error("structure_residuals_example12: immersion lacks c1/c2 metadata");
  const double c1 = c1_it->second, c2 = c2_it->second;

  const Jet2 j = jet(imm.eval, imm.inside(), p, cfg);
  const double v = p[1], z = p[2];
  const double s2 = z * z + 1.0;
  const double e2v = std::exp(2.0 * v);
  const double lam = c1 * e2v * std::sqrt(s2);
  const double alpha1_sq = s2 * (c2 * e2v - 1.0 - c1 * c1 * e2v * e2v);
  const double f_sq = std::exp(-2.0 * v) / (c2 * s2);
  const Vec5& x = j.value;
  const Vec5 &xu = j.d1[0], &xv = j.d1[1], &xz = j.d1[2];

  Vec5 y = normal_complement(x, xu, xv, xz);
  canonicalize_normal_sign(y);
  auto res_xuu = [&](const Vec5& yy) {
    return (j.d2[0] - f_sq * (alpha1_sq * xv + z * s2 * xz + lam * yy - x)).norm();
  };
  if (res_xuu(-y) < res_xuu(y)) y = -y;

  ResidualMap r;
  r["xvz"] = (j.d2[4] + z / s2 * xv).norm();
  r["xuz"] = (j.d2[2] + z / s2 * xu).norm();
  r["xuv"] = (j.d2[1] + xu).norm();
  r["xuu"] = res_xuu(y);
  r["xzz"] = (j.d2[5] + 2.0 * z / s2 * xz + x / (s2 * s2)).norm();
  r["xvv"] =
      (j.d2[3] -
       (-(alpha1_sq + z * z + 1.0 - lam * lam) * xv + z * s2 * xz - lam * y - x) / alpha1_sq)
          .norm();
  const auto dy = normal_partials(imm, p, cfg, y);
  r["yu"] = (dy[0] + lam * xu).norm();
  r["yv"] = (dy[1] - lam * xv).norm();
  r["yz"] = dy[2].norm();
  const Vec5 xuuu = third_partial(imm.eval, imm.inside(), p, 0, 1e-3);
  r["xuuu"] = (xuuu + xu).norm();
  r["f_identity"] = std::abs(s2 * xu.dot(xu) - std::exp(-2.0 * v) / c2);
  return r;
}

ResidualMap lie_bracket_residuals(const Immersion& imm, const Vec3& p, const DiffConfig& cfg) {
  const FrameCtx ctx = frame_ctx(imm, p, cfg, nullptr);
  const auto a = ctx.alphas();

  auto bracket = [&](int i, int j) {
    Vec3 out = Vec3::Zero();
    for (int ax = 0; ax < 3; ++ax)
      out += ctx.e(i)[ax] * ctx.dframe[ax].col(j) - ctx.e(j)[ax] * ctx.dframe[ax].col(i);
    return out;
  };

  ResidualMap r;
  r["e1e2"] = ctx.inorm(bracket(0, 1) -
                        (-a[0] * ctx.e(0) + a[3] * ctx.e(1) + 2.0 * a[2] * ctx.e(2)));
  r["e1e3"] = ctx.inorm(bracket(0, 2) - (-a[1] * ctx.e(0) - 0.5 * a[2] * ctx.e(1)));
  r["e2e3"] = ctx.inorm(bracket(1, 2) - (0.5 * a[2] * ctx.e(0) - a[1] * ctx.e(1)));
  return r;
}

ResidualMap frame_pde_residuals(const Immersion& imm, const Vec3& p, const DiffConfig& cfg) {
  const FrameCtx ctx = frame_ctx(imm, p, cfg, nullptr);
  const auto a = ctx.alphas();
  const double lam = ctx.c.lambda[0];

  // Alpha fields on the outer stencil, all aligned to the center frame.
  std::array<std::array<double, 9>, 3> dalpha;
  for (int ax = 0; ax < 3; ++ax) {
    const double h = 5e-3 * std::max(1.0, std::abs(p[ax]));
    Vec3 qp = p, qm = p;
    qp[ax] += h;
    qm[ax] -= h;
    const auto ap = alpha_coefficients(imm, qp, cfg, &ctx.c.frame).alpha;
    const auto am = alpha_coefficients(imm, qm, cfg, &ctx.c.frame).alpha;
    for (int k = 0; k < 9; ++k) dalpha[ax][k] = (ap[k] - am[k]) / (2.0 * h);
  }
  auto dir = [&](int i, int k) {
    double out = 0.0;
    for (int ax = 0; ax < 3; ++ax) out += ctx.e(i)[ax] * dalpha[ax][k];
    return out;
  };

  ResidualMap r;
  r["eq1"] = std::abs(dir(0, 3) + dir(1, 0) -
                      (1.0 - lam * lam + a[0] * a[0] + a[1] * a[1] + 2.0 * a[2] * a[2] +
                       a[3] * a[3]));
  r["eq2"] = std::abs(dir(2, 0) + 0.5 * dir(0, 2) - (a[0] * a[1] - 0.5 * a[2] * a[3]));
  r["eq3"] = std::abs(dir(2, 3) - 0.5 * dir(1, 2) - (a[1] * a[3] + 0.5 * a[0] * a[2]));
  r["eq4"] = std::abs(dir(2, 1) - (1.0 + a[1] * a[1] - a[2] * a[2]));
  r["eq5"] = std::abs(dir(2, 2) - 2.0 * a[1] * a[2]);
  r["eq6"] = std::abs(dir(0, 1) - dir(1, 2));
  r["eq7"] = std::abs(dir(0, 2) + dir(1, 1));
  return r;
}

// --- grid scans ---

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "unit_norm", "H",   "K",         "lambda1",     "codazzi",     "weingarten",
      "gauss",     "lie", "frame_pde", "structure11", "structure12",
  };
  return names;
}

bool check_applies(const std::string& check, const Immersion& imm) {
  if (check == "structure11") return imm.label == "example11";
  if (check == "structure12") return imm.label == "example12";
  if (check == "lambda1") return static_cast<bool>(imm.expected_lambda1);
  return true;
}

double default_tolerance(const std::string& name) {
  static const std::map<std::string, double> exact = {
      {"structure11.xuv", 1e-6}, {"structure11.xuuu", 1e-3},
      {"structure12.xuv", 1e-5}, {"structure12.xuuu", 1e-3},
  };
  static const std::map<std::string, double> group = {
      {"unit_norm", 1e-9}, {"H", 1e-5},     {"K", 1e-5},          {"lambda1", 1e-5},
      {"codazzi", 1e-3},   {"weingarten", 1e-4}, {"gauss", 1e-2}, {"lie", 1e-3},
      {"frame_pde", 5e-2}, {"structure11", 1e-4}, {"structure12", 1e-3},
  };
  if (auto it = exact.find(name); it != exact.end()) return it->second;
  const std::string prefix = name.substr(0, name.find('.'));
  if (auto it = group.find(prefix); it != group.end()) return it->second;
  throw Error("no default tolerance for check '" + name + "'");
}

ResidualReport scan_grid(const Immersion& imm, const GridSpec& grid,
                         const std::vector<std::string>& checks,
                         const std::map<std::string, double>& tolerance_overrides,
                         const DiffConfig& cfg) {
  for (const auto& name : checks) {
    if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
      throw Error("unknown check '" + name + "'");
    if (!check_applies(name, imm))
      throw Error("check '" + name + "' does not apply to family '" + imm.label + "'");
  }

  auto axis_value = [](const GridAxis& ax, int i) {
    return ax.count < 2 ? ax.lo : ax.lo + (ax.hi - ax.lo) * i / (ax.count - 1);
  };
  auto resolve_tol = [&](const std::string& name) {
    if (auto it = tolerance_overrides.find(name); it != tolerance_overrides.end())
      return it->second;
    const std::string prefix = name.substr(0, name.find('.'));
    if (auto it = tolerance_overrides.find(prefix); it != tolerance_overrides.end())
      return it->second;
    return default_tolerance(name);
  };

  ResidualReport report;
  for (int iu = 0; iu < grid.u.count; ++iu) {
    for (int iv = 0; iv < grid.v.count; ++iv) {
      for (int iz = 0; iz < grid.z.count; ++iz) {
        const Vec3 p(axis_value(grid.u, iu), axis_value(grid.v, iv), axis_value(grid.z, iz));
        ++report.total_points;
        try {
          std::optional<CurvatureSample> curv;
          auto curv_at = [&]() -> const CurvatureSample& {
            if (!curv) curv = curvature(imm, p, cfg);
            return *curv;
          };
          ResidualMap values;
          for (const auto& name : checks) {
            if (name == "unit_norm") {
              values["unit_norm"] = std::abs(imm.eval(p).norm() - 1.0);
            } else if (name == "H") {
              values["H"] = std::abs(curv_at().H);
            } else if (name == "K") {
              values["K"] = std::abs(curv_at().K);
            } else if (name == "lambda1") {
              values["lambda1"] = std::abs(curv_at().lambda[0] - imm.expected_lambda1(p));
            } else if (name == "weingarten") {
              values["weingarten"] = weingarten_residual(imm, p, cfg);
            } else if (name == "gauss") {
              values["gauss"] = gauss_residual(imm, p, cfg);
            } else {
              ResidualMap sub;
              if (name == "codazzi") sub = codazzi_residuals(imm, p, cfg);
              else if (name == "lie") sub = lie_bracket_residuals(imm, p, cfg);
              else if (name == "frame_pde") sub = frame_pde_residuals(imm, p, cfg);
              else if (name == "structure11") sub = structure_residuals_example11(imm, p, cfg);
              else if (name == "structure12") sub = structure_residuals_example12(imm, p, cfg);
              for (const auto& [key, value] : sub) values[name + "." + key] = value;
            }
          }
          for (const auto& [key, value] : values) {
            CheckStat& stat = report.checks[key];
            if (stat.samples == 0 || value > stat.max_abs) {
              if (value > stat.max_abs) stat.worst_point = p;
              stat.max_abs = std::max(stat.max_abs, value);
              if (stat.samples == 0) stat.worst_point = p;
            }
            stat.mean_abs += value;
            ++stat.samples;
          }
        } catch (const DomainEscape& e) {
          ++report.excluded;
          ++report.exclusion_reasons["DomainEscape"];
        } catch (const DegenerateFrame& e) {
          ++report.excluded;
          ++report.exclusion_reasons["DegenerateFrame"];
        } catch (const DegeneratePencil& e) {
          ++report.excluded;
          ++report.exclusion_reasons["DegeneratePencil"];
        } catch (const FrameAlignmentFailure& e) {
          ++report.excluded;
          ++report.exclusion_reasons["FrameAlignmentFailure"];
        } catch (const PoleSingularity& e) {
          ++report.excluded;
          ++report.exclusion_reasons["PoleSingularity"];
        } catch (const OutOfInterval& e) {
          ++report.excluded;
          ++report.exclusion_reasons["OutOfInterval"];
        } catch (const QuadratureFailure& e) {
          ++report.excluded;
          ++report.exclusion_reasons["QuadratureFailure"];
        }
      }
    }
  }

  bool all_pass = true;
  for (auto& [name, stat] : report.checks) {
    if (stat.samples > 0) stat.mean_abs /= stat.samples;
    stat.tolerance = resolve_tol(name);
    stat.pass = stat.max_abs <= stat.tolerance;
    all_pass = all_pass && stat.pass;
  }
  const bool budget_ok =
      report.total_points == 0 || report.excluded * 100 <= report.total_points;
  report.pass = all_pass && budget_ok && !report.checks.empty();
  return report;
}

}  // namespace minsurf
