#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace minsurf {

/// Endpoints of the open interval where c2*e^{2v} - 1 - c1^2*e^{4v} > 0.
/// Throws EmptyInterval when c2^2 <= 4*c1^2.
std::pair<double, double> validity_interval(double c1, double c2);

/// Closed-form derivative of the phase function; positive on the open
/// interval, with poles at both endpoints.  Throws OutOfInterval.
double phi_prime(double v, double c1, double c2);

/// Phase function anchored at the interval midpoint (phi(v0) = 0) together
/// with the two amplitude solutions it generates.  Construction integrates
/// phi' once into a dense node table; evaluation is a piecewise quintic
/// Hermite interpolant (values at nodes, closed-form phi' and phi''), so
/// phi is smooth to roundoff between queries.
class PhaseSolution {
 public:
  PhaseSolution(double c1, double c2);

  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  double v0() const { return v0_; }

  /// Refuses evaluations within 1e-6 of either endpoint (phi' poles).
  double phi(double v) const;

  /// The two amplitude solutions of Example 1.2; g^2 + h^2 = 1 - e^{-2v}/c2
  /// holds to roundoff by construction.
  std::pair<double, double> gh(double v) const;

  /// General solution a*sqrt(c2-e^{-2v})*cos(phi) + b*(...)*sin(phi).
  double general_solution(double a, double b, double v) const;

 private:
  double c1_, c2_, v_min_, v_max_, v0_;
  std::vector<double> nodes_;
  std::vector<double> phi_nodes_;

  void require_inside(double v) const;
};

/// Residual of (c2 e^{2v}-1-c1^2 e^{4v}) A'' + (1-c1^2 e^{4v}) A' + 2A with
/// A', A'' taken by five-point central differences of the supplied sampler.
double ode_residual_323(const std::function<double(double)>& A, double v, double c1, double c2);

/// Residual of B'' - (phi''/phi') B' + phi'^2 B with closed-form phi' and a
/// central-difference phi''.
double ode_residual_324(const std::function<double(double)>& B, double v,
                        const PhaseSolution& sol);

/// Adaptive Simpson quadrature with interval bisection, absolute tolerance.
/// Throws QuadratureFailure if the tolerance is unreachable within the
/// evaluation budget.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, long max_evals = 1000000);

}  // namespace minsurf
