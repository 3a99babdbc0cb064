#include "schouten/geometry.hpp"

#include <cmath>

#include "schouten/errors.hpp"

namespace schouten {

MetricValues metric_at(const Chart& chart, const Eigen::VectorXd& p) {
  const VarBinding b = chart.binding_at(p);
  MetricValues mv;
  mv.g.resize(chart.n, chart.n);
  for (int i = 0; i < chart.n; ++i)
    for (int j = 0; j < chart.n; ++j) mv.g(i, j) = evaluate(chart.g[i][j], b);
  validate_metric(mv.g, mv.g_inv, mv.det);
  return mv;
}

TensorValue christoffel(const Chart& chart, const Eigen::VectorXd& p) {
  CurvatureJets cj = curvature_jets(chart, p, 1);
  TensorValue t;
  t.point.assign(p.data(), p.data() + p.size());
  t.variance = {Slot::Upper, Slot::Lower, Slot::Lower};
  t.comps = cj.gamma;
  return t;
}

namespace {

void check_riemann_invariants(const CurvatureJets& cj) {
  const int n = cj.n;
  double scale = 1e-30;
  for (std::size_t i = 0; i < cj.riem.size(); ++i)
    scale = std::max(scale, std::abs(cj.riem.flat(i)));
  const double tol = 1e-9 * (1.0 + scale);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double r = cj.riem(i, j, k, l);
          if (std::abs(r + cj.riem(j, i, k, l)) > tol ||
              std::abs(r + cj.riem(i, j, l, k)) > tol ||
              std::abs(r - cj.riem(k, l, i, j)) > tol ||
              std::abs(r + cj.riem(j, k, i, l) + cj.riem(k, i, j, l)) > tol)
            throw Error(
                "curvature pipeline fault: Riemann symmetries violated");
        }
  if ((cj.ric - cj.ric.transpose()).cwiseAbs().maxCoeff() >
      1e-9 * (1.0 + cj.ric.cwiseAbs().maxCoeff()))
    throw Error("curvature pipeline fault: Ricci tensor not symmetric");
}

CurvaturePack pack_from_jets(const CurvatureJets& cj, bool with_nabla_ricci) {
  check_riemann_invariants(cj);
  CurvaturePack pk;
  pk.point = cj.point;
  pk.g = cj.g;
  pk.g_inv = cj.ginv;
  pk.det_g = cj.det;
  pk.christoffel = cj.gamma;
  pk.riemann = cj.riem;
  pk.ricci = cj.ric;
  pk.scalar = cj.R;
  pk.ricci_norm2 = cj.ricci_norm2();
  if (with_nabla_ricci) {
    const int n = cj.n;
    TensorData<double> nric(n, 3);
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = cj.dric(a, j, k);
          for (int m = 0; m < n; ++m)
            acc -= cj.gamma(m, a, j) * cj.ric(m, k) +
                   cj.gamma(m, a, k) * cj.ric(j, m);
          nric(a, j, k) = acc;
        }
    pk.nabla_ricci = std::move(nric);
  }
  return pk;
}

}  // namespace

TensorValue riemann(const Chart& chart, const Eigen::VectorXd& p) {
  CurvatureJets cj = curvature_jets(chart, p, 2);
  TensorValue t;
  t.point.assign(p.data(), p.data() + p.size());
  t.variance = {Slot::Lower, Slot::Lower, Slot::Lower, Slot::Lower};
  t.comps = cj.riem;
  return t;
}

Eigen::MatrixXd ricci(const Chart& chart, const Eigen::VectorXd& p) {
  return curvature_jets(chart, p, 2).ric;
}

double scalar_curvature(const Chart& chart, const Eigen::VectorXd& p) {
  return curvature_jets(chart, p, 2).R;
}

CurvaturePack curvature_pack(const Chart& chart, const Eigen::VectorXd& p,
                             const CurvaturePackOptions& opts) {
  CurvatureJets cj = curvature_jets(chart, p, opts.with_nabla_ricci ? 3 : 2);
  return pack_from_jets(cj, opts.with_nabla_ricci);
}

CurvaturePack curvature_pack_fd(const Chart& chart, const Eigen::VectorXd& p,
                                double h) {
  CurvatureJets cj = curvature_jets(fd_metric_jet(chart, p, 2, h));
  return pack_from_jets(cj, false);
}

TensorValue covariant_derivative(const ExprTensor& field, const Chart& chart,
                                 const Eigen::VectorXd& p) {
  const int n = chart.n;
  if (field.dim() != n)
    throw ChartError("tensor field dimension does not match chart");
  const int rank = field.rank();
  if (static_cast<int>(field.variance.size()) != rank)
    throw ChartError("tensor field variance list does not match rank");

  CurvatureJets cj = curvature_jets(chart, p, 1);
  const VarBinding b = chart.binding_at(p);

  TensorValue out;
  out.point.assign(p.data(), p.data() + p.size());
  out.variance.push_back(Slot::Lower);
  out.variance.insert(out.variance.end(), field.variance.begin(),
                      field.variance.end());
  out.comps = TensorData<double>(n, rank + 1);

  // Walk every (a, multi-index) cell.
  std::vector<int> idx(rank, 0);
  const std::size_t cells = field.comps.size();
  for (std::size_t flat = 0; flat < cells; ++flat) {
    std::size_t rem = flat;
    for (int r = rank - 1; r >= 0; --r) {
      idx[r] = static_cast<int>(rem % n);
      rem /= n;
    }
    for (int a = 0; a < n; ++a) {
      double acc = evaluate(
          differentiate(field.comps.flat(flat), chart.coords[a]), b);
      for (int slot = 0; slot < rank; ++slot) {
        for (int m = 0; m < n; ++m) {
          std::vector<int> jdx = idx;
          jdx[slot] = m;
          std::size_t jflat = 0;
          for (int r = 0; r < rank; ++r)
            jflat = jflat * n + static_cast<std::size_t>(jdx[r]);
          double tv = evaluate(field.comps.flat(jflat), b);
          if (field.variance[slot] == Slot::Upper)
            acc += cj.gamma(idx[slot], a, m) * tv;
          else
            acc -= cj.gamma(m, a, idx[slot]) * tv;
        }
      }
      std::size_t oflat = static_cast<std::size_t>(a);
      for (int r = 0; r < rank; ++r)
        oflat = oflat * n + static_cast<std::size_t>(idx[r]);
      out.comps.flat(oflat) = acc;
    }
  }
  return out;
}

Eigen::VectorXd gradient(const Expr& f, const Chart& chart,
                         const Eigen::VectorXd& p) {
  MetricValues mv = metric_at(chart, p);
  ScalarJet sj = scalar_jet(f, chart, p, 1);
  return mv.g_inv * sj.d1;
}

Eigen::MatrixXd hessian(const Expr& f, const Chart& chart,
                        const Eigen::VectorXd& p) {
  CurvatureJets cj = curvature_jets(chart, p, 1);
  ScalarJet sj = scalar_jet(f, chart, p, 2);
  const int n = chart.n;
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = sj.d2(i, j);
      for (int m = 0; m < n; ++m) acc -= cj.gamma(m, i, j) * sj.d1[m];
      h(i, j) = acc;
    }
  return h;
}

double laplacian(const Expr& f, const Chart& chart, const Eigen::VectorXd& p) {
  CurvatureJets cj = curvature_jets(chart, p, 1);
  ScalarJet sj = scalar_jet(f, chart, p, 2);
  const int n = chart.n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double hij = sj.d2(i, j);
      for (int m = 0; m < n; ++m) hij -= cj.gamma(m, i, j) * sj.d1[m];
      acc += cj.ginv(i, j) * hij;
    }
  return acc;
}

double grad_norm2(const Expr& f, const Chart& chart, const Eigen::VectorXd& p) {
  MetricValues mv = metric_at(chart, p);
  ScalarJet sj = scalar_jet(f, chart, p, 1);
  return sj.d1.dot(mv.g_inv * sj.d1);
}

}  // namespace schouten
