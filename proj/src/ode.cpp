#include "schouten/ode.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "schouten/errors.hpp"

namespace schouten {

namespace {

double sigma0_at(double lambda, double b, double bp) {
  double den = b * (bp - 2.0 * lambda);
  if (std::abs(bp - 2.0 * lambda) < 1e-12 || den == 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  double num = (bp - 4.0 * lambda) * (bp - 4.0 * lambda);
  return num / den;
}

}  // namespace

OdeTrajectory integrate_equality_ode(double lambda, double b0, double bp0,
                                     double s_begin, double s_end, double h) {
  if (!(b0 > 0.0)) throw PreconditionError("b0 must be positive");
  if (!(h > 0.0)) throw PreconditionError("step h must be positive");
  if (!(s_end > s_begin)) throw PreconditionError("empty s-range");

  OdeTrajectory traj;
  traj.lambda = lambda;
  traj.h = h;

  auto accel = [lambda](double b, double bp) {
    return (bp * bp - 6.0 * lambda * bp + 8.0 * lambda * lambda) / b;
  };

  double s = s_begin, b = b0, bp = bp0;
  const long steps = static_cast<long>(std::floor((s_end - s_begin) / h + 0.5));
  traj.s.push_back(s);
  traj.b.push_back(b);
  traj.bp.push_back(bp);
  traj.sigma0.push_back(sigma0_at(lambda, b, bp));

  for (long i = 0; i < steps; ++i) {
    if (b < 1e-8) {
      traj.truncation = "b reached 0 (b'' blows up)";
      break;
    }
    // Classical RK4 on y = (b, b').
    double k1b = bp, k1p = accel(b, bp);
    double b2 = b + 0.5 * h * k1b, p2 = bp + 0.5 * h * k1p;
    if (b2 < 1e-8) { traj.truncation = "b reached 0 (b'' blows up)"; break; }
    double k2b = p2, k2p = accel(b2, p2);
    double b3 = b + 0.5 * h * k2b, p3 = bp + 0.5 * h * k2p;
    if (b3 < 1e-8) { traj.truncation = "b reached 0 (b'' blows up)"; break; }
    double k3b = p3, k3p = accel(b3, p3);
    double b4 = b + h * k3b, p4 = bp + h * k3p;
    if (b4 < 1e-8) { traj.truncation = "b reached 0 (b'' blows up)"; break; }
    double k4b = p4, k4p = accel(b4, p4);

    b += h / 6.0 * (k1b + 2.0 * (k2b + k3b) + k4b);
    bp += h / 6.0 * (k1p + 2.0 * (k2p + k3p) + k4p);
    s = s_begin + (i + 1) * h;
    if (b < 1e-8) {
      traj.truncation = "b reached 0 (b'' blows up)";
      break;
    }
    traj.s.push_back(s);
    traj.b.push_back(b);
    traj.bp.push_back(bp);
    traj.sigma0.push_back(sigma0_at(lambda, b, bp));
  }

  // Drift against the initial-condition sigma0 (NaN-safe).
  double sig0 = traj.sigma0.front();
  if (std::isfinite(sig0)) {
    double drift = 0.0;
    for (std::size_t i = 0; i < traj.s.size(); ++i) {
      double lhs = (traj.bp[i] - 4.0 * lambda) * (traj.bp[i] - 4.0 * lambda);
      double rhs = sig0 * traj.b[i] * (traj.bp[i] - 2.0 * lambda);
      drift = std::max(drift,
                       std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    traj.sigma0_drift = drift;
  } else {
    traj.sigma0_drift = std::numeric_limits<double>::quiet_NaN();
  }
  return traj;
}

FirstIntegral first_integral(const OdeTrajectory& traj) {
  const double lambda = traj.lambda;
  for (std::size_t i = 0; i < traj.s.size(); ++i)
    if (std::abs(traj.bp[i] - 2.0 * lambda) < 1e-6) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6g", traj.s[i]);
      throw PreconditionError(
          "first integral undefined: b' crosses 2 lambda near s = " +
          std::string(buf));
    }
  FirstIntegral out;
  out.sigma0 = sigma0_at(lambda, traj.b.front(), traj.bp.front());
  double drift = 0.0;
  for (std::size_t i = 0; i < traj.s.size(); ++i) {
    double lhs = (traj.bp[i] - 4.0 * lambda) * (traj.bp[i] - 4.0 * lambda);
    double rhs = out.sigma0 * traj.b[i] * (traj.bp[i] - 2.0 * lambda);
    drift = std::max(drift, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  out.max_drift = drift;
  return out;
}

RewritingResiduals rewriting_checks(const OdeTrajectory& traj, double lambda) {
  const std::size_t m = traj.s.size();
  RewritingResiduals out;
  if (m < 3) {
    out.tolerance = 0.0;
    out.pass = true;
    return out;
  }
  const double h = traj.h;
  double scale = 1.0;
  double ru = 0.0, rv = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    double u0 = traj.b[i - 1] * (traj.bp[i - 1] - 2.0 * lambda);
    double u1 = traj.b[i] * (traj.bp[i] - 2.0 * lambda);
    double u2 = traj.b[i + 1] * (traj.bp[i + 1] - 2.0 * lambda);
    double du = (u2 - u0) / (2.0 * h);
    double urhs = 2.0 / (traj.b[i] * traj.b[i]) * u1 * u1;
    ru = std::max(ru, std::abs(du - urhs));

    double v0 = traj.b[i - 1] * (traj.bp[i - 1] - 4.0 * lambda);
    double v1 = traj.b[i] * (traj.bp[i] - 4.0 * lambda);
    double v2 = traj.b[i + 1] * (traj.bp[i + 1] - 4.0 * lambda);
    double dv = (v2 - v0) / (2.0 * h);
    double vrhs = 2.0 * (traj.bp[i] - lambda) / traj.b[i] * v1;
    rv = std::max(rv, std::abs(dv - vrhs));

    scale = std::max({scale, std::abs(urhs), std::abs(vrhs)});
  }
  out.u_residual = ru;
  out.v_residual = rv;
  out.tolerance = 10.0 * h * h * scale;
  out.pass = ru <= out.tolerance && rv <= out.tolerance;
  return out;
}

CurveTrace trace_integral_curve(const SolitonData& sd,
                                const Eigen::VectorXd& start, double s_len,
                                double h, double eps_regular) {
  if (!(h > 0.0)) throw PreconditionError("step h must be positive");
  if (!(s_len > 0.0)) throw PreconditionError("empty s-range");
  const Chart& ch = sd.chart;
  if (!ch.in_domain(start))
    throw PreconditionError("start point is outside the chart domain");

  // alpha' = grad f / |grad f|^2, evaluated from the metric and the
  // symbolic coordinate gradient of f.
  std::vector<Expr> df(ch.n, Expr::constant(0.0));
  for (int a = 0; a < ch.n; ++a) df[a] = differentiate(sd.f, ch.coords[a]);

  auto field = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    MetricValues mv = metric_at(ch, x);
    Eigen::VectorXd d1(ch.n);
    VarBinding bind = ch.binding_at(x);
    for (int a = 0; a < ch.n; ++a) d1[a] = evaluate(df[a], bind);
    Eigen::VectorXd up = mv.g_inv * d1;
    double gn2 = d1.dot(up);
    if (gn2 <= eps_regular * eps_regular) return false;
    out = up / gn2;
    return true;
  };

  {
    Eigen::VectorXd probe;
    if (!field(start, probe))
      throw PreconditionError(
          "start is a critical point of f (|grad f| <= eps)");
  }

  CurveTrace tr;
  tr.h = h;
  auto record = [&](double s, const Eigen::VectorXd& x) {
    CurvatureJets cj = curvature_jets(ch, x, 2);
    ScalarJet fj = scalar_jet(sd.f, ch, x, 1);
    Eigen::VectorXd up = cj.ginv * fj.d1;
    tr.s.push_back(s);
    tr.points.push_back(x);
    tr.f.push_back(fj.v);
    tr.b.push_back(fj.d1.dot(up));
    tr.scalar.push_back(cj.R);
  };

  Eigen::VectorXd x = start;
  record(0.0, x);
  // Step-resolution floor: near a critical value of f the speed 1/|grad f|
  // outruns the step size before the pointwise |grad f| test can fire, so
  // stop once b is too small to resolve with this h.
  const double b_floor = std::max(eps_regular * eps_regular,
                                  4.0 * h * (1.0 + std::abs(sd.lambda)));
  const long steps = static_cast<long>(std::floor(s_len / h + 0.5));
  for (long i = 0; i < steps; ++i) {
    if (tr.b.back() < b_floor) {
      tr.truncation = "approaching critical set of f";
      break;
    }
    Eigen::VectorXd k1, k2, k3, k4;
    if (!field(x, k1)) { tr.truncation = "approaching critical set of f"; break; }
    if (!field(x + 0.5 * h * k1, k2)) { tr.truncation = "approaching critical set of f"; break; }
    if (!field(x + 0.5 * h * k2, k3)) { tr.truncation = "approaching critical set of f"; break; }
    if (!field(x + h * k3, k4)) { tr.truncation = "approaching critical set of f"; break; }
    Eigen::VectorXd next = x + h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
    if (!ch.in_domain(next)) {
      tr.truncation = "curve left the chart domain";
      break;
    }
    x = next;
    record((i + 1) * h, x);
  }

  // Post-condition: f grows linearly with unit slope along the curve.
  for (std::size_t i = 0; i < tr.s.size(); ++i)
    if (std::abs((tr.f[i] - tr.f[0]) - (tr.s[i] - tr.s[0])) >
        1e-5 * std::max(1.0, tr.s[i] - tr.s[0]))
      throw Error(
          "trace linearity invariant violated (f did not grow with unit "
          "slope); reduce the step h");
  return tr;
}

TraceChecks inequality_check(const CurveTrace& tr, double lambda, int n) {
  const std::size_t m = tr.s.size();
  if (m < 5)
    throw PreconditionError(
        "trace too short for finite differences (need >= 5 grid points)");
  const double h = tr.h;
  TraceChecks out;
  out.ode_min_slack = std::numeric_limits<double>::infinity();
  out.product_max = -std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < m; ++i)
    out.linearity_residual =
        std::max(out.linearity_residual,
                 std::abs((tr.f[i] - tr.f[0]) - (tr.s[i] - tr.s[0])));

  double sum_s = 0, sum_b = 0, sum_ss = 0, sum_sb = 0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    double bp = (tr.b[i + 1] - tr.b[i - 1]) / (2.0 * h);
    double bpp = (tr.b[i + 1] - 2.0 * tr.b[i] + tr.b[i - 1]) / (h * h);
    double lhs = tr.b[i] * bpp - bp * bp + 6.0 * lambda * bp -
                 8.0 * lambda * lambda;
    out.ode_min_slack = std::min(out.ode_min_slack, lhs);
    out.bprime_vs_curvature =
        std::max(out.bprime_vs_curvature,
                 std::abs(bp - (tr.scalar[i] / (n - 1) + 2.0 * lambda)));
    out.product_max = std::max(
        out.product_max, (bp - 2.0 * lambda) * (bp - 4.0 * lambda));
  }
  for (std::size_t i = 0; i < m; ++i) {
    sum_s += tr.s[i];
    sum_b += tr.b[i];
    sum_ss += tr.s[i] * tr.s[i];
    sum_sb += tr.s[i] * tr.b[i];
  }
  double denom = m * sum_ss - sum_s * sum_s;
  out.slope = denom != 0.0 ? (m * sum_sb - sum_s * sum_b) / denom : 0.0;
  return out;
}

namespace {

void put17(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const OdeTrajectory& traj) {
  os << "s,b,bprime,sigma0_resid\n";
  double sig0 = traj.sigma0.front();
  for (std::size_t i = 0; i < traj.s.size(); ++i) {
    double resid = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(sig0)) {
      double lhs = (traj.bp[i] - 4.0 * traj.lambda) *
                   (traj.bp[i] - 4.0 * traj.lambda);
      double rhs = sig0 * traj.b[i] * (traj.bp[i] - 2.0 * traj.lambda);
      resid = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    }
    put17(os, traj.s[i]);
    os << ',';
    put17(os, traj.b[i]);
    os << ',';
    put17(os, traj.bp[i]);
    os << ',';
    put17(os, resid);
    os << '\n';
  }
}

void write_trace_csv(std::ostream& os, const CurveTrace& trace) {
  os << "s,f,b\n";
  for (std::size_t i = 0; i < trace.s.size(); ++i) {
    put17(os, trace.s[i]);
    os << ',';
    put17(os, trace.f[i]);
    os << ',';
    put17(os, trace.b[i]);
    os << '\n';
  }
}

}  // namespace schouten
