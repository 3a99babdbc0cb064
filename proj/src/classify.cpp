#include "schouten/classify.hpp"

#include <cmath>

#include "schouten/errors.hpp"

namespace schouten {

const char* to_string(SolitonClass c) {
  switch (c) {
    case SolitonClass::Einstein: return "Einstein";
    case SolitonClass::Gaussian: return "Gaussian";
    case SolitonClass::Cylinder: return "cylinder R x N^{n-1}";
    case SolitonClass::NotRigidEvidence: return "not-rigid-evidence";
    case SolitonClass::NotASoliton: return "not-a-soliton";
  }
  return "?";
}

int rank_of_ricci(const CurvaturePack& pack, double tol) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(pack.ricci,
                                                               pack.g);
  const double thresh = tol * (1.0 + std::abs(pack.scalar));
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i]) > thresh) ++rank;
  return rank;
}

ClassificationVerdict classify(const SolitonData& sd,
                               const std::vector<Eigen::VectorXd>& samples,
                               const ClassifyOptions& opts) {
  const int n = sd.chart.n;
  ClassificationVerdict v;
  if (samples.empty()) throw PreconditionError("no sample points supplied");

  double r_min = std::numeric_limits<double>::infinity();
  double r_max = -r_min;
  double ric_dev = 0.0;  // max |Ric - (R/n) g| across samples

  for (const auto& p : samples) {
    CurvatureJets cj = curvature_jets(sd.chart, p, 2);
    ScalarJet fj = scalar_jet(sd.f, sd.chart, p, 2);
    Eigen::VectorXd gradf_up = cj.ginv * fj.d1;
    double gn = std::sqrt(std::max(0.0, fj.d1.dot(gradf_up)));

    Eigen::MatrixXd hess(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = fj.d2(i, j);
        for (int m = 0; m < n; ++m) acc -= cj.gamma(m, i, j) * fj.d1[m];
        hess(i, j) = acc;
      }
    Eigen::MatrixXd resid =
        cj.ric + hess - (cj.R / (2.0 * (n - 1)) + sd.lambda) * cj.g;
    v.max_eq1_residual =
        std::max(v.max_eq1_residual, gnorm_tensor2(cj.ginv, resid));

    r_min = std::min(r_min, cj.R);
    r_max = std::max(r_max, cj.R);
    v.max_grad_norm = std::max(v.max_grad_norm, gn);

    CurvaturePack pack;
    pack.g = cj.g;
    pack.ricci = cj.ric;
    pack.scalar = cj.R;
    v.ricci_rank_histogram[rank_of_ricci(pack, opts.rank_tol)]++;

    if (gn > opts.eps_regular) {
      ++v.regular_count;
      double defect = cj.R * cj.R - (n - 1) * cj.ricci_norm2();
      v.max_defect_abs = std::max(v.max_defect_abs, std::abs(defect));
    }
    ric_dev = std::max(
        ric_dev, gnorm_tensor2(cj.ginv, Eigen::MatrixXd(
                                            cj.ric - (cj.R / n) * cj.g)));
  }
  v.r_min = r_min;
  v.r_max = r_max;
  v.r_spread = r_max - r_min;
  const double r_mean = 0.5 * (r_min + r_max);

  // (i) soliton-equation gate
  if (v.max_eq1_residual > opts.eq1_gate) {
    v.label = SolitonClass::NotASoliton;
    v.failed_gate = "soliton-equation residual";
    return v;
  }

  const bool f_constant = v.max_grad_norm <= opts.grad_const;
  if (!f_constant && v.regular_count < opts.min_regular)
    throw PreconditionError(
        "too few regular samples (" + std::to_string(v.regular_count) +
        " < " + std::to_string(opts.min_regular) + ")");

  // (ii) two-eigenvalue defect gate (hypothesis), at regular points only
  if (v.max_defect_abs > opts.defect_rel * (1.0 + r_mean * r_mean)) {
    v.label = SolitonClass::NotRigidEvidence;
    v.failed_gate = "two-eigenvalue defect";
    return v;
  }

  // (iii) scalar-curvature constancy
  if (v.r_spread > opts.r_const_rel * (1.0 + std::abs(r_mean))) {
    v.label = SolitonClass::NotRigidEvidence;
    v.failed_gate = "scalar-curvature constancy";
    return v;
  }

  // (iv) decide the model
  const double r_norm = r_mean / sd.lambda;  // lambda-normalized R

  if (f_constant) {
    // Einstein case: Ric = (R/n) g with R fixed by the k = n relation.
    if (ric_dev > opts.einstein_rel * (1.0 + std::abs(r_mean))) {
      v.label = SolitonClass::NotRigidEvidence;
      v.failed_gate = "Einstein condition Ric = (R/n) g";
      return v;
    }
    double target = 2.0 * n * (n - 1) / (n - 2);
    if (std::abs(r_norm - target) > opts.lambda_rel) {
      v.label = SolitonClass::NotRigidEvidence;
      v.failed_gate = "Einstein scalar curvature vs lambda relation";
      return v;
    }
    v.label = SolitonClass::Einstein;
    return v;
  }

  auto rank_always = [&](int want) {
    for (const auto& [rank, count] : v.ricci_rank_histogram)
      if (rank != want) return false;
    return true;
  };

  if (std::abs(r_norm) <= opts.lambda_rel && rank_always(0)) {
    v.label = SolitonClass::Gaussian;
    return v;
  }
  if (std::abs(r_norm - 2.0 * (n - 1)) <= opts.lambda_rel &&
      rank_always(n - 1)) {
    v.label = SolitonClass::Cylinder;
    return v;
  }

  v.label = SolitonClass::NotRigidEvidence;
  v.failed_gate = "scalar curvature / Ricci rank do not match a rigid model";
  return v;
}

}  // namespace schouten
