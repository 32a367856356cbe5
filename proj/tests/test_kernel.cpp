#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "minsurf/errors.hpp"
#include "minsurf/families.hpp"
#include "minsurf/kernel.hpp"

using namespace minsurf;

namespace {

// Characteristic-polynomial oracle for the pencil det(A - lambda B) = 0:
// interpolate the cubic from four determinant evaluations and solve it with
// the trigonometric formula (all roots are real for a symmetric pencil).
Vec3 pencil_eigenvalues_oracle(const Mat3& A, const Mat3& B) {
  Eigen::Matrix4d V;
  Eigen::Vector4d rhs;
  const double samples[4] = {-1.0, 0.0, 1.0, 2.0};
  for (int i = 0; i < 4; ++i) {
    const double x = samples[i];
    V(i, 0) = 1.0;
    V(i, 1) = x;
    V(i, 2) = x * x;
    V(i, 3) = x * x * x;
    rhs[i] = (A - x * B).determinant();
  }
  const Eigen::Vector4d c = V.fullPivLu().solve(rhs);  // c0 + c1 x + c2 x^2 + c3 x^3

  // monic depressed cubic t^3 + p t + q with x = t - b/3
  const double b = c[2] / c[3], cc = c[1] / c[3], d = c[0] / c[3];
  const double p = cc - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
  Vec3 roots;
  if (p > -1e-30) {
    roots.setConstant(std::cbrt(-q));
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots[k] = m * std::cos(theta - 2.0 * M_PI * k / 3.0);
  }
  for (int k = 0; k < 3; ++k) roots[k] -= b / 3.0;
  std::sort(roots.data(), roots.data() + 3, std::greater<double>());
  return roots;
}

}  // namespace

TEST_CASE("inner product") {
  Vec5 a = Vec5::Zero(), b = Vec5::Zero();
  a[0] = 1.0;
  b[1] = 1.0;
  CHECK(dot(a, b) == 0.0);
  CHECK(dot(Vec5::Ones(), Vec5::Ones()) == 5.0);
  Vec5 c1 = Vec5::Zero();
  c1[0] = 1.0 / std::sqrt(2.0);
  CHECK(dot(c1, c1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normal complement: axis-aligned and degenerate inputs") {
  Vec5 e[5];
  for (int i = 0; i < 5; ++i) e[i] = Vec5::Unit(i);
  const Vec5 y = normal_complement(e[0], e[1], e[2], e[3]);
  CHECK(std::abs(std::abs(y[4]) - 1.0) < 1e-15);
  CHECK_THROWS_AS(normal_complement(e[0], e[1], e[2], e[0]), DegenerateFrame);
}

TEST_CASE("normal complement matches the first family's normal at the chart origin") {
  const Immersion imm = make_example11(Example11Params::standard_basis());
  const DiffConfig cfg;
  const Jet2 j = jet_of(imm, Vec3::Zero(), cfg);
  const Vec5 y = normal_complement(j.value, j.d1[0], j.d1[1], j.d1[2]);
  Vec5 expected = Vec5::Zero();
  expected[0] = -1.0 / std::sqrt(2.0);
  expected[2] = 1.0 / std::sqrt(2.0);
  CHECK(std::min((y - expected).norm(), (y + expected).norm()) < 1e-9);
}

TEST_CASE("normal complement: 1000 random well-conditioned quadruples") {
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss;
  int tested = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Vec5 v[4];
    for (auto& w : v)
      for (int i = 0; i < 5; ++i) w[i] = gauss(rng);
    Vec5 y;
    try {
      y = normal_complement(v[0], v[1], v[2], v[3]);
    } catch (const DegenerateFrame&) {
      continue;  // random quadruple happened to be ill-conditioned
    }
    ++tested;
    CHECK(std::abs(y.norm() - 1.0) <= 1e-12);
    for (const auto& w : v) CHECK(std::abs(y.dot(w)) <= 1e-12 * w.norm());
  }
  CHECK(tested > 950);
}

TEST_CASE("jet: constants and polynomials") {
  const DiffConfig cfg;
  auto always = [](const Vec3&) { return true; };

  auto constant = [](const Vec3&) { return Vec5::Ones().eval(); };
  const Jet2 jc = jet(constant, always, Vec3(0.2, -0.3, 0.9), cfg);
  for (int a = 0; a < 3; ++a) CHECK(jc.d1[a].norm() < 1e-10);
  for (int i = 0; i < 6; ++i) CHECK(jc.d2[i].norm() < 1e-7);

  auto quad = [](const Vec3& p) {
    Vec5 out = Vec5::Zero();
    out[0] = p[0] * p[0];
    out[1] = p[0] * p[1] + 2.0 * p[2];
    return out;
  };
  const Jet2 jq = jet(quad, always, Vec3(1.0, 0.0, 0.0), cfg);
  CHECK(std::abs(jq.d1[0][0] - 2.0) < 1e-8);
  CHECK(std::abs(jq.second(0, 0)[0] - 2.0) < 1e-6);
  CHECK(std::abs(jq.second(0, 1)[1] - 1.0) < 1e-9);
  CHECK(std::abs(jq.d1[2][1] - 2.0) < 1e-9);
}

TEST_CASE("jet: trigonometric convergence order at least two") {
  auto always = [](const Vec3&) { return true; };
  auto f = [](const Vec3& p) {
    Vec5 out = Vec5::Zero();
    out[0] = std::sin(3.0 * p[0]) * std::cos(p[1]);
    return out;
  };
  const Vec3 p(0.4, 0.8, 0.0);
  const double exact = -9.0 * std::sin(3.0 * p[0]) * std::cos(p[1]);
  DiffConfig cfg;
  cfg.richardson = false;
  cfg.base_step = 1e-2;
  const double err_h = std::abs(jet(f, always, p, cfg).second(0, 0)[0] - exact);
  cfg.base_step = 5e-3;
  const double err_h2 = std::abs(jet(f, always, p, cfg).second(0, 0)[0] - exact);
  CHECK(err_h2 < err_h / 3.0);  // observed order >= 2
}

TEST_CASE("jet: second u-derivative of the first family at (0,0,1)") {
  const Immersion imm = make_example11(Example11Params::standard_basis());
  DiffConfig cfg;
  cfg.use_analytic = false;
  const Jet2 j = jet(imm.eval, imm.inside(), Vec3(0.0, 0.0, 1.0), cfg);
  CHECK(std::abs(j.second(0, 0)[0] - (-1.0)) < 1e-6);  // -2*(1/sqrt2)/sqrt2
}

TEST_CASE("jet: stencil escape raises DomainEscape") {
  auto f = [](const Vec3&) { return Vec5::Zero().eval(); };
  auto inside = [](const Vec3& p) { return p[0] < 1.0; };
  const DiffConfig cfg;
  CHECK_THROWS_AS(jet(f, inside, Vec3(0.99999, 0.0, 0.0), cfg), DomainEscape);
}

TEST_CASE("pencil eigensolver: diagonal cases") {
  const Mat3 A = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const Eig3 e = generalized_sym_eig3(A, Mat3::Identity());
  CHECK(e.lambda.isApprox(Vec3(3, 2, 1), 1e-12));
  CHECK_FALSE(e.degenerate);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(std::abs(e.vectors.col(i)[i]) - 1.0) < 1e-12);

  const Mat3 A2 = 2.0 * Mat3::Identity();
  const Mat3 B2 = Eigen::Vector3d(2, 1, 1).asDiagonal();
  const Eig3 e2 = generalized_sym_eig3(A2, B2);
  CHECK(e2.lambda.isApprox(Vec3(2, 2, 1), 1e-12));
  CHECK(e2.degenerate);  // repeated eigenvalue
}

TEST_CASE("pencil eigensolver: B must be positive definite") {
  const Mat3 B = Eigen::Vector3d(1, -1, 1).asDiagonal();
  CHECK_THROWS_AS(generalized_sym_eig3(Mat3::Identity(), B), NotPositiveDefinite);
}

TEST_CASE("pencil eigensolver vs characteristic-polynomial oracle, plus reconstruction") {
  std::mt19937 rng(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 200; ++trial) {
    Mat3 R, S;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        R(i, j) = gauss(rng);
        S(i, j) = gauss(rng);
      }
    const Mat3 A = 0.5 * (R + R.transpose());
    const Mat3 B = S * S.transpose() + 0.5 * Mat3::Identity();  // SPD

    const Eig3 e = generalized_sym_eig3(A, B);
    const Vec3 oracle = pencil_eigenvalues_oracle(A, B);
    const double scale = std::max(1.0, oracle.cwiseAbs().maxCoeff());
    CHECK((e.lambda - oracle).cwiseAbs().maxCoeff() < 1e-8 * scale);

    // B-orthonormality and reconstruction A = B V diag(lambda) V^T B
    const Mat3 G = e.vectors.transpose() * B * e.vectors;
    CHECK((G - Mat3::Identity()).norm() < 1e-10);
    const Mat3 recon = B * e.vectors * e.lambda.asDiagonal() * e.vectors.transpose() * B;
    CHECK((recon - A).norm() <= 1e-9 * std::max(1.0, A.norm()));

    for (int i = 0; i < 3; ++i) {
      const Vec3 v = e.vectors.col(i);
      CHECK((A * v - e.lambda[i] * (B * v)).norm() <= 1e-10 * std::max(1.0, A.norm()));
      int arg = 0;
      v.cwiseAbs().maxCoeff(&arg);
      CHECK(v[arg] > 0.0);  // sign canonicalization
    }
  }
}

TEST_CASE("pencil of the first family at z = 1") {
  const Immersion imm = make_example11(Example11Params::standard_basis());
  const DiffConfig cfg;
  const Jet2 j = jet_of(imm, Vec3(0.3, 0.8, 1.0), cfg);
  Mat3 I, II;
  const Vec5 y = normal_complement(j.value, j.d1[0], j.d1[1], j.d1[2]);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      I(a, b) = j.d1[a].dot(j.d1[b]);
      II(a, b) = j.second(a, b).dot(y);
    }
  const Eig3 e = generalized_sym_eig3(II, I);
  const double s2 = std::sqrt(2.0);
  CHECK(std::abs(std::abs(e.lambda[0]) - s2) < 1e-9);
  CHECK(std::abs(e.lambda[1]) < 1e-9);
  CHECK(std::abs(std::abs(e.lambda[2]) - s2) < 1e-9);
  CHECK(std::abs(e.lambda[0] + e.lambda[2]) < 1e-9);  // symmetric spectrum
}
