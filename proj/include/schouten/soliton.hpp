#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "schouten/chart.hpp"
#include "schouten/geometry.hpp"

namespace schouten {

/// Chart plus potential function f and soliton constant lambda.
/// Candidate for Ric + Hess f = (R/(2(n-1)) + lambda) g.
struct SolitonData {
  Chart chart;
  Expr f = Expr::constant(0.0);
  double lambda = 0.0;
  std::optional<double> f0;  // extremum of f, when known
  bool einstein_case = false;
  std::string name;
};

struct SolitonTolerances {
  double eq1_gate = 1e-8;        // soliton-equation pass level
  double identity = 1e-8;        // trace / Ric(grad f) / scalar identities
  double defect_sign = 1e-8;     // two-eigenvalue defect <= this at regular pts
  double bach_eigen = 1e-7;      // Bach eigenvector residual
  double cotton_riemann = 1e-8;  // C_ijk = R_jikl grad^l f
  double inequality = 1e-8;      // negative-slack tolerance (scaled)
  double eps_regular = 1e-6;     // |grad f| threshold for regular points
};

/// One row of a residual report.  `residual` is the worst (max) value
/// seen; pass iff residual <= tolerance.  Informational rows never fail.
struct ResidualEntry {
  std::string key;
  std::string description;
  double residual = 0.0;
  double tolerance = 0.0;
  Eigen::VectorXd worst_point;
  bool pass = true;
  bool informational = false;
  std::string skipped;  // non-empty: row was skipped for this reason
};

struct ResidualReport {
  std::vector<ResidualEntry> entries;

  bool all_pass() const;
  /// Merge a pointwise entry: keep the max residual and its point.
  void absorb(const ResidualEntry& e);
  void merge(const ResidualReport& other);
  const ResidualEntry* find(const std::string& key) const;
};

/// Ric + Hess f - (R/(2(n-1)) + lambda) g at p.
Eigen::MatrixXd soliton_residual(const SolitonData& sd,
                                 const Eigen::VectorXd& p);
/// Metric-invariant norm of the residual tensor.
double soliton_residual_norm(const SolitonData& sd, const Eigen::VectorXd& p);

/// The three soliton identities at p (trace identity, Ric(grad f) = 0,
/// scalar-curvature identity).  They are consequences of the soliton
/// equation, so the suite is skipped where the equation itself fails.
ResidualReport identity_suite(const SolitonData& sd, const Eigen::VectorXd& p,
                              const SolitonTolerances& tol = {});

/// Scalar-curvature bounds 0 <= lambda R <= 2(n-1) lambda^2 and gradient
/// bounds 2 lambda (f - f0) <= |grad f|^2 <= 4 lambda (f - f0).
/// f0 is taken from sd, the explicit argument, or multi-start descent.
ResidualReport inequality_suite(const SolitonData& sd, const Eigen::VectorXd& p,
                                std::optional<double> f0 = std::nullopt,
                                const SolitonTolerances& tol = {});

/// Cotton-Riemann relation and the Bach eigenvector law
/// B(grad f, .) = mu g(grad f, .),
/// mu = (R^2 - (n-1)|Ric|^2) / ((n-1)(n-2)^2).
/// Skipped (with reason) at critical points of f.
ResidualReport bach_eigen_check(const SolitonData& sd, const Eigen::VectorXd& p,
                                const SolitonTolerances& tol = {});

/// R^2 - (n-1)|Ric|^2; zero iff Ric has at most the two eigenvalues
/// {0, R/(n-1)}, and <= 0 at regular points of any soliton.
double two_eigenvalue_defect(const SolitonData& sd, const Eigen::VectorXd& p);

/// Extremum of f over the domain box (minimum for lambda > 0, maximum
/// for lambda < 0) by multi-start projected gradient descent with
/// backtracking.  An explicit sd.f0 always wins.
double resolve_f0(const SolitonData& sd);

/// Run every check over the sample points and aggregate per identity.
/// Includes the divergence-of-Bach rows for n = 3, which are recorded
/// with both candidate signs and never asserted.
ResidualReport verify_soliton(const SolitonData& sd,
                              const std::vector<Eigen::VectorXd>& points,
                              const SolitonTolerances& tol = {});

}  // namespace schouten
