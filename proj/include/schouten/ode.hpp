#pragma once

#include <Eigen/Dense>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "schouten/soliton.hpp"

namespace schouten {

/// Numerical solution of b b'' - (b')^2 + 6 lambda b' - 8 lambda^2 = 0
/// on a uniform s-grid, with the per-step first-integral estimate
/// sigma0 = (b'-4 lambda)^2 / (b (b'-2 lambda)) (NaN where b' = 2 lambda).
struct OdeTrajectory {
  double lambda = 0.0;
  double h = 0.0;
  std::vector<double> s, b, bp;
  std::vector<double> sigma0;
  double sigma0_drift = 0.0;  // max relative first-integral residual
  std::optional<std::string> truncation;
};

/// Classical 4th-order one-step (RK4) integration of the first-order
/// system (b, b') with b'' = ((b')^2 - 6 lambda b' + 8 lambda^2)/b.
/// Truncates (with reason) when b drops below 1e-8.
OdeTrajectory integrate_equality_ode(double lambda, double b0, double bp0,
                                     double s_begin, double s_end, double h);

struct FirstIntegral {
  double sigma0 = 0.0;
  double max_drift = 0.0;
};

/// sigma0 from the initial condition plus the max relative drift of
/// (b'-4l)^2 - sigma0 b (b'-2l) over the grid.  Requires |b'-2l| >= 1e-6
/// along the whole trajectory; a crossing raises PreconditionError
/// naming the offending s.
FirstIntegral first_integral(const OdeTrajectory& traj);

/// Finite-difference check of the two exact rewritings
///   (b(b'-2l))' = (2/b^2) (b(b'-2l))^2
///   (b(b'-4l))' = (2(b'-l)/b) b(b'-4l)
/// on the trajectory grid.  Residuals are max abs over interior points;
/// tolerance defaults to 10 h^2 scale.
struct RewritingResiduals {
  double u_residual = 0.0;
  double v_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

RewritingResiduals rewriting_checks(const OdeTrajectory& traj, double lambda);

/// Trace of an integral curve of grad f/|grad f|^2 through a chart:
/// points, f values, b = |grad f|^2 and the scalar curvature along it.
struct CurveTrace {
  double h = 0.0;
  std::vector<double> s;
  std::vector<Eigen::VectorXd> points;
  std::vector<double> f, b, scalar;
  std::optional<std::string> truncation;
};

/// RK4 integration of alpha' = grad f/|grad f|^2 from `start` over an
/// s-span of `s_len`.  Truncates at the domain boundary or when
/// |grad f| < eps_regular.  Starting at a critical point is an error.
CurveTrace trace_integral_curve(const SolitonData& sd,
                                const Eigen::VectorXd& start, double s_len,
                                double h, double eps_regular = 1e-6);

/// Differential checks along a trace (centered differences; the two
/// endpoint rows are excluded).
struct TraceChecks {
  double linearity_residual = 0.0;  // max |(f(s)-f(s0)) - (s-s0)|
  double ode_min_slack = 0.0;       // min of b b'' - (b')^2 + 6l b' - 8l^2
  double bprime_vs_curvature = 0.0; // max |b' - (R/(n-1) + 2 lambda)|
  double product_max = 0.0;         // max (b'-2l)(b'-4l)
  double slope = 0.0;               // least-squares slope of b against s
};

TraceChecks inequality_check(const CurveTrace& trace, double lambda, int n);

/// CSV: header `s,b,bprime,sigma0_resid`, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const OdeTrajectory& traj);
/// CSV: header `s,f,b`, 17 significant digits.
void write_trace_csv(std::ostream& os, const CurveTrace& trace);

}  // namespace schouten
