#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "schouten/geometry.hpp"
#include "schouten/soliton.hpp"

namespace schouten {

enum class SolitonClass {
  Einstein,
  Gaussian,
  Cylinder,       // R x N^{n-1}
  NotRigidEvidence,
  NotASoliton,
};

const char* to_string(SolitonClass c);

struct ClassifyOptions {
  double eq1_gate = 1e-8;      // soliton-equation residual gate
  double defect_rel = 1e-6;    // |defect| <= rel (1 + R^2) at regular points
  double r_const_rel = 1e-6;   // max-min of R <= rel (1 + |R|)
  double lambda_rel = 1e-5;    // |R/lambda - target| tolerance
  double grad_const = 1e-8;    // f constant iff |grad f| <= this everywhere
  double einstein_rel = 1e-7;  // |Ric - (R/n) g| <= rel (1 + |R|)
  double rank_tol = 1e-6;      // eigenvalue threshold factor
  double eps_regular = 1e-6;
  int min_regular = 20;
};

/// Numerical evidence for the classification; label semantics are
/// "consistent with the named model at sampled resolution".
struct ClassificationVerdict {
  SolitonClass label = SolitonClass::NotRigidEvidence;
  double r_min = 0.0, r_max = 0.0, r_spread = 0.0;
  std::map<int, int> ricci_rank_histogram;
  double max_defect_abs = 0.0;    // over regular samples
  double max_grad_norm = 0.0;     // f-constancy measure
  double max_eq1_residual = 0.0;
  int regular_count = 0;
  std::string failed_gate;        // set for the two negative labels
};

/// Decision pipeline: (i) soliton-equation gate, (ii) two-eigenvalue
/// defect gate at regular points, (iii) scalar-curvature constancy,
/// (iv) model decision by R/lambda and Ricci rank:
///   R ~ 0, rank 0                       -> Gaussian
///   R ~ 2(n-1) lambda, rank n-1         -> cylinder R x N^{n-1}
///   f constant, Ric = (R/n) g and
///   R ~ 2n(n-1) lambda/(n-2)           -> Einstein
/// Anything else is reported as not-rigid-evidence with the failed gate
/// named.  Requires >= min_regular regular samples when f is nonconstant.
ClassificationVerdict classify(const SolitonData& sd,
                               const std::vector<Eigen::VectorXd>& samples,
                               const ClassifyOptions& opts = {});

/// Count of eigenvalues of g^{-1} Ric with magnitude > tol (1 + |R|),
/// computed on the g-orthonormalized symmetric form so the result is
/// basis-independent.
int rank_of_ricci(const CurvaturePack& pack, double tol = 1e-6);

}  // namespace schouten
