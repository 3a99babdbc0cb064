#pragma once

#include <Eigen/Dense>
#include <optional>

#include "schouten/chart.hpp"
#include "schouten/jets.hpp"
#include "schouten/tensor.hpp"

namespace schouten {

struct MetricValues {
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;
  double det = 0.0;
};

/// Evaluate the metric at p.  Checks symmetry, positive definiteness
/// (leading principal minors) and inversion quality; see validate_metric.
MetricValues metric_at(const Chart& chart, const Eigen::VectorXd& p);

/// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij),
/// slots (upper, lower, lower), symmetric in (i, j).
TensorValue christoffel(const Chart& chart, const Eigen::VectorXd& p);

/// Lowered Riemann tensor; see CurvatureJets for the sign convention.
TensorValue riemann(const Chart& chart, const Eigen::VectorXd& p);
Eigen::MatrixXd ricci(const Chart& chart, const Eigen::VectorXd& p);
double scalar_curvature(const Chart& chart, const Eigen::VectorXd& p);

struct CurvaturePackOptions {
  bool with_nabla_ricci = false;
};

struct CurvaturePack {
  Eigen::VectorXd point;
  Eigen::MatrixXd g, g_inv;
  double det_g = 0.0;
  TensorData<double> christoffel;           // (k, i, j)
  TensorData<double> riemann;               // (i, j, k, l)
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
  double ricci_norm2 = 0.0;
  std::optional<TensorData<double>> nabla_ricci;  // (a; j, k)
};

/// One-stop pointwise curvature.  Construction verifies the Riemann
/// symmetries, the first Bianchi identity and Ricci symmetry to 1e-9
/// relative; a violation indicates a pipeline fault and throws.
CurvaturePack curvature_pack(const Chart& chart, const Eigen::VectorXd& p,
                             const CurvaturePackOptions& opts = {});

/// Same pack computed from the finite-difference metric jet (independent
/// pipeline; identical downstream algebra).  No nabla-Ricci.
CurvaturePack curvature_pack_fd(const Chart& chart, const Eigen::VectorXd& p,
                                double h = 1e-2);

/// Covariant derivative of an expression-backed tensor field at p.
/// Adds one leading lower slot; reduces to the coordinate partials on
/// flat charts.
TensorValue covariant_derivative(const ExprTensor& field, const Chart& chart,
                                 const Eigen::VectorXd& p);

/// grad f with the index raised: (grad f)^i = g^{ij} d_j f.
Eigen::VectorXd gradient(const Expr& f, const Chart& chart,
                         const Eigen::VectorXd& p);
/// Hess f_ij = d_i d_j f - Gamma^m_ij d_m f (symmetric).
Eigen::MatrixXd hessian(const Expr& f, const Chart& chart,
                        const Eigen::VectorXd& p);
/// Laplacian = g-trace of the Hessian.
double laplacian(const Expr& f, const Chart& chart, const Eigen::VectorXd& p);
/// |grad f|^2 = g^{ij} d_i f d_j f.
double grad_norm2(const Expr& f, const Chart& chart, const Eigen::VectorXd& p);

}  // namespace schouten
