#pragma once

#include <Eigen/Dense>
#include <optional>

#include "schouten/chart.hpp"
#include "schouten/jets.hpp"
#include "schouten/tensor.hpp"

namespace schouten {

/// W_ijkl = R_ijkl - (g_ik Ric_jl - g_il Ric_jk - g_jk Ric_il + g_jl Ric_ik)/(n-2)
///        + R (g_ik g_jl - g_il g_jk) / ((n-1)(n-2)).
/// Requires n >= 3.  Identically zero (to roundoff) when n = 3.
TensorData<double> weyl(const Chart& chart, const Eigen::VectorXd& p);

/// C_ijk = grad_i Ric_jk - grad_j Ric_ik
///       - (g_jk grad_i R - g_ik grad_j R) / (2(n-1)).
/// Antisymmetric in (i, j), trace-free in (j, k).  Requires n >= 3.
TensorData<double> cotton(const Chart& chart, const Eigen::VectorXd& p);

/// Bach tensor.  n >= 4: computed through both the double-divergence-of-
/// Weyl route and the divergence-of-Cotton route; a relative disagreement
/// beyond 1e-6 throws ConventionError (the sign conventions would be
/// inconsistent).  Returns the Cotton-route value.  n = 3:
/// B_ij = grad^k C_kij.
Eigen::MatrixXd bach(const Chart& chart, const Eigen::VectorXd& p);

/// The two routes individually, for auditing (n >= 4 only).
Eigen::MatrixXd bach_via_weyl(const Chart& chart, const Eigen::VectorXd& p);
Eigen::MatrixXd bach_via_cotton(const Chart& chart, const Eigen::VectorXd& p);

/// n = 3 only: (div B)_j = -Ric^{il} C_jil.
Eigen::VectorXd div_bach(const Chart& chart, const Eigen::VectorXd& p);

/// n = 3 only: direct covariant divergence g^{ab} grad_a B_bj, with the
/// outer derivative of B taken by 4th-order central differences of the
/// exact pointwise Bach tensor.  Independent cross-check of div_bach.
Eigen::VectorXd div_bach_direct(const Chart& chart, const Eigen::VectorXd& p,
                                double h = 1e-3);

struct ConformalPack {
  Eigen::VectorXd point;
  TensorData<double> weyl;    // (i, j, k, l)
  TensorData<double> cotton;  // (i, j, k)
  Eigen::MatrixXd bach;
  std::optional<Eigen::VectorXd> div_bach;  // n = 3
};

/// All conformal tensors at once.  Construction verifies the structural
/// invariants (Weyl trace-free, Cotton antisymmetric and trace-free, Bach
/// symmetric; Bach trace-free for n >= 4) and throws on violation.
ConformalPack conformal_pack(const Chart& chart, const Eigen::VectorXd& p);

// Jet-level building blocks shared with the soliton module.
TensorData<double> weyl_from_jets(const CurvatureJets& cj);
TensorData<double> cotton_from_jets(const CurvatureJets& cj);
Eigen::MatrixXd bach_from_jets(const CurvatureJets& cj);

}  // namespace schouten
