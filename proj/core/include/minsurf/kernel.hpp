#pragma once

#include <array>
#include <functional>

#include "minsurf/types.hpp"

namespace minsurf {

/// Settings for finite-difference jets and eigen post-processing.
struct DiffConfig {
  double base_step = 1e-4;
  bool richardson = true;
  double degenerate_gap = 1e-9;
  /// Prefer a family's exact analytic jet when it provides one.
  bool use_analytic = true;
};

inline double dot(const Vec5& a, const Vec5& b) { return a.dot(b); }

/// Unit vector orthogonal to four linearly independent vectors in R^5,
/// built as the generalized cross product (cofactor expansion along a
/// symbolic first row).  Throws DegenerateFrame when the inputs are
/// nearly dependent.
Vec5 normal_complement(const Vec5& v1, const Vec5& v2, const Vec5& v3, const Vec5& v4);

/// Value and first/second partials of a chart point.  Second partials are
/// stored once per unordered index pair: uu, uv, uz, vv, vz, zz.
struct Jet2 {
  Vec5 value;
  std::array<Vec5, 3> d1;
  std::array<Vec5, 6> d2;

  const Vec5& second(int a, int b) const {
    static constexpr int idx[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return d2[idx[a][b]];
  }
};

using PointFn = std::function<Vec5(const Vec3&)>;
using InsideFn = std::function<bool(const Vec3&)>;

/// Central-difference jet with per-coordinate step base_step*max(1,|p_i|)
/// and one level of Richardson extrapolation when enabled.  Every stencil
/// point is checked against `inside` first; DomainEscape otherwise.
Jet2 jet(const PointFn& f, const InsideFn& inside, const Vec3& p, const DiffConfig& cfg);

/// Third pure partial along one chart axis, five-point central stencil.
Vec5 third_partial(const PointFn& f, const InsideFn& inside, const Vec3& p, int axis,
                   double step);

struct Eig3 {
  Vec3 lambda;     // descending
  Mat3 vectors;    // columns, B-orthonormal, largest-|component| positive
  bool degenerate = false;
};

/// Solves the symmetric pencil A v = lambda B v for 3x3 A (symmetric) and
/// B (symmetric positive-definite).  Throws NotPositiveDefinite when the
/// Cholesky factorization of B fails; sets the degenerate flag when the
/// smallest eigenvalue gap is below `degenerate_gap`.
Eig3 generalized_sym_eig3(const Mat3& A, const Mat3& B, double degenerate_gap = 1e-9);

}  // namespace minsurf
