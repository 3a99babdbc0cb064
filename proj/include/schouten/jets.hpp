#pragma once

#include <Eigen/Dense>

#include "schouten/chart.hpp"
#include "schouten/tensor.hpp"

namespace schouten {

/// Pointwise values of the metric components and their partial
/// derivatives up to `order` (max 4).  Derivative indices come first:
/// dg(a;i,j) = d_a g_ij, d2g(a,b;i,j) = d_a d_b g_ij, and so on.
struct MetricJet {
  int n = 0;
  int order = 0;
  Eigen::VectorXd point;
  Eigen::MatrixXd g;
  TensorData<double> dg;    // (a, i, j)
  TensorData<double> d2g;   // (a, b, i, j)
  TensorData<double> d3g;   // (a, b, c, i, j)
  TensorData<double> d4g;   // (a, b, c, d, i, j)
};

/// Metric jet from exact symbolic differentiation of the chart's
/// component expressions (cached per (expression, variable)).
MetricJet symbolic_metric_jet(const Chart& chart, const Eigen::VectorXd& p,
                              int order);

/// Independent pipeline: metric jet from 4th-order central finite
/// differences of the evaluated components (order <= 2).
MetricJet fd_metric_jet(const Chart& chart, const Eigen::VectorXd& p,
                        int order, double h = 1e-2);

/// Everything the curvature formulas need at one point, derived from a
/// metric jet by exact pointwise algebra.  Populated up to the jet's
/// order:
///   order >= 1: ginv, dginv, gamma
///   order >= 2: d2ginv, dgamma, riem, ric, R
///   order >= 3: d3ginv, d2gamma, driem, dric, dR
///   order >= 4: d3gamma, d2riem, d2ric, d2R
///
/// Convention: R(X,Y)Z = grad_X grad_Y Z - grad_Y grad_X Z - grad_[X,Y] Z,
/// components stored as riem(i,j,k,l) = <R(d_i,d_j) d_l, d_k>, and
/// ric(j,l) = ginv(i,k) riem(i,j,k,l).  With this placement the unit round
/// 2-sphere has scalar curvature +2 and the Weyl tensor built from riem,
/// ric, R is totally trace-free.
struct CurvatureJets {
  int n = 0;
  int order = 0;
  Eigen::VectorXd point;

  Eigen::MatrixXd g;
  TensorData<double> dg, d2g, d3g, d4g;

  Eigen::MatrixXd ginv;
  double det = 0.0;
  TensorData<double> dginv, d2ginv, d3ginv;  // (a;i,j), (a,b;i,j), ...

  TensorData<double> gamma;    // (k, i, j) = Gamma^k_ij
  TensorData<double> dgamma;   // (a; k, i, j)
  TensorData<double> d2gamma;  // (a, b; k, i, j)
  TensorData<double> d3gamma;  // (a, b, c; k, i, j)

  TensorData<double> riem;     // (i, j, k, l)
  TensorData<double> driem;    // (a; i, j, k, l)
  TensorData<double> d2riem;   // (a, b; i, j, k, l)

  Eigen::MatrixXd ric;
  TensorData<double> dric;     // (a; j, l)
  TensorData<double> d2ric;    // (a, b; j, l)

  double R = 0.0;
  Eigen::VectorXd dR;
  Eigen::MatrixXd d2R;

  double ricci_norm2() const;  // |Ric|^2 = ric_jl ric_mp ginv^jm ginv^lp
};

CurvatureJets curvature_jets(const MetricJet& mj);
CurvatureJets curvature_jets(const Chart& chart, const Eigen::VectorXd& p,
                             int order);

/// Value and partials of a scalar expression at p (order <= 2).
struct ScalarJet {
  double v = 0.0;
  Eigen::VectorXd d1;
  Eigen::MatrixXd d2;
};

ScalarJet scalar_jet(const Expr& f, const Chart& chart,
                     const Eigen::VectorXd& p, int order);

/// Checks symmetry (1e-10 relative) and positive definiteness (leading
/// principal minors, det > 1e-12) and returns the inverse by direct
/// solve.  Throws ChartError / DegenerateMetricError.
void validate_metric(const Eigen::MatrixXd& g, Eigen::MatrixXd& ginv,
                     double& det);

// Metric-invariant norms (all-lower-index components).
double gnorm_covector(const Eigen::MatrixXd& ginv, const Eigen::VectorXd& v);
double gnorm_tensor2(const Eigen::MatrixXd& ginv, const Eigen::MatrixXd& t);
double gnorm_tensor3(const Eigen::MatrixXd& ginv, const TensorData<double>& t);
double gnorm_tensor4(const Eigen::MatrixXd& ginv, const TensorData<double>& t);

}  // namespace schouten
