#include "minsurf/kernel.hpp"

#include <cmath>

#include "minsurf/errors.hpp"

namespace minsurf {

Vec5 normal_complement(const Vec5& v1, const Vec5& v2, const Vec5& v3, const Vec5& v4) {
  Eigen::Matrix<double, 4, 5> rows;
  rows.row(0) = v1.transpose();
  rows.row(1) = v2.transpose();
  rows.row(2) = v3.transpose();
  rows.row(3) = v4.transpose();

  Vec5 n;
  for (int i = 0; i < 5; ++i) {
    Eigen::Matrix4d minor;
    int c = 0;
    for (int j = 0; j < 5; ++j) {
      if (j == i) continue;
      minor.col(c++) = rows.col(j);
    }
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    n[i] = sign * minor.determinant();
  }

  const double norm = n.norm();
  if (norm < 1e-10) throw DegenerateFrame("normal_complement: inputs nearly dependent");
  return n / norm;
}

namespace {

Vec3 shifted(const Vec3& p, int a, double da, int b = -1, double db = 0.0) {
  Vec3 q = p;
  q[a] += da;
  if (b >= 0) q[b] += db;
  return q;
}

}  // namespace

Jet2 jet(const PointFn& f, const InsideFn& inside, const Vec3& p, const DiffConfig& cfg) {
  Vec3 h;
  for (int a = 0; a < 3; ++a) h[a] = cfg.base_step * std::max(1.0, std::abs(p[a]));

  auto eval = [&](const Vec3& q) -> Vec5 {
    if (!inside(q)) throw DomainEscape("jet: stencil point outside the validity domain");
    return f(q);
  };

  // All stencil evaluations for one step size.
  struct Pass {
    std::array<Vec5, 3> d1;
    std::array<Vec5, 6> d2;
  };
  const Vec5 f0 = eval(p);
  auto run = [&](double scale) {
    Pass out;
    std::array<Vec5, 3> fp, fm;
    for (int a = 0; a < 3; ++a) {
      const double ha = h[a] * scale;
      fp[a] = eval(shifted(p, a, ha));
      fm[a] = eval(shifted(p, a, -ha));
      out.d1[a] = (fp[a] - fm[a]) / (2.0 * ha);
    }
    int k = 0;
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b, ++k) {
        const double ha = h[a] * scale, hb = h[b] * scale;
        if (a == b) {
          out.d2[k] = (fp[a] - 2.0 * f0 + fm[a]) / (ha * ha);
        } else {
          const Vec5 fpp = eval(shifted(p, a, ha, b, hb));
          const Vec5 fpm = eval(shifted(p, a, ha, b, -hb));
          const Vec5 fmp = eval(shifted(p, a, -ha, b, hb));
          const Vec5 fmm = eval(shifted(p, a, -ha, b, -hb));
          out.d2[k] = (fpp - fpm - fmp + fmm) / (4.0 * ha * hb);
        }
      }
    }
    return out;
  };

  Jet2 out;
  out.value = f0;
  const Pass coarse = run(1.0);
  if (!cfg.richardson) {
    out.d1 = coarse.d1;
    out.d2 = coarse.d2;
    return out;
  }
  // Both first and second central differences have even error series in h,
  // so one extrapolation level is (4*D(h/2) - D(h)) / 3.
  const Pass fine = run(0.5);
  for (int a = 0; a < 3; ++a) out.d1[a] = (4.0 * fine.d1[a] - coarse.d1[a]) / 3.0;
  for (int k = 0; k < 6; ++k) out.d2[k] = (4.0 * fine.d2[k] - coarse.d2[k]) / 3.0;
  return out;
}

Vec5 third_partial(const PointFn& f, const InsideFn& inside, const Vec3& p, int axis,
                   double step) {
  const double ha = step * std::max(1.0, std::abs(p[axis]));
  auto eval = [&](double d) -> Vec5 {
    Vec3 q = shifted(p, axis, d);
    if (!inside(q)) throw DomainEscape("third_partial: stencil point outside domain");
    return f(q);
  };
  return (eval(2.0 * ha) - 2.0 * eval(ha) + 2.0 * eval(-ha) - eval(-2.0 * ha)) /
         (2.0 * ha * ha * ha);
}

Eig3 generalized_sym_eig3(const Mat3& A, const Mat3& B, double degenerate_gap) {
  Eigen::LLT<Mat3> llt(B);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("generalized_sym_eig3: B is not positive-definite");

  Eigen::GeneralizedSelfAdjointEigenSolver<Mat3> solver(A, B);
  if (solver.info() != Eigen::Success)
    throw NotPositiveDefinite("generalized_sym_eig3: eigen solver failed");

  // Eigen returns ascending order; flip to descending.
  Eig3 out;
  for (int i = 0; i < 3; ++i) {
    out.lambda[i] = solver.eigenvalues()[2 - i];
    out.vectors.col(i) = solver.eigenvectors().col(2 - i);
  }
  for (int i = 0; i < 3; ++i) {
    int arg = 0;
    out.vectors.col(i).cwiseAbs().maxCoeff(&arg);
    if (out.vectors(arg, i) < 0.0) out.vectors.col(i) = -out.vectors.col(i);
  }
  const double gap = std::min(out.lambda[0] - out.lambda[1], out.lambda[1] - out.lambda[2]);
  out.degenerate = gap < degenerate_gap;
  return out;
}

}  // namespace minsurf
