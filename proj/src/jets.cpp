#include "schouten/jets.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "schouten/errors.hpp"

namespace schouten {

namespace {

double eval_component(const Chart& chart, int i, int j, const VarBinding& b) {
  return evaluate(chart.g[i][j], b);
}

// Assign v at every permutation of the derivative multi-index (partial
// derivatives commute for the smooth expressions of the DSL).
template <typename SetFn>
void for_permutations(std::vector<int> idx, SetFn&& set) {
  std::sort(idx.begin(), idx.end());
  do {
    set(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
}

}  // namespace

MetricJet symbolic_metric_jet(const Chart& chart, const Eigen::VectorXd& p,
                              int order) {
  const int n = chart.n;
  MetricJet jet;
  jet.n = n;
  jet.order = order;
  jet.point = p;
  const VarBinding b = chart.binding_at(p);

  jet.g.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) jet.g(i, j) = eval_component(chart, i, j, b);

  if (order >= 1) jet.dg = TensorData<double>(n, 3);
  if (order >= 2) jet.d2g = TensorData<double>(n, 4);
  if (order >= 3) jet.d3g = TensorData<double>(n, 5);
  if (order >= 4) jet.d4g = TensorData<double>(n, 6);

  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Expr& gij = chart.g[i][j];
      if (order < 1) continue;
      for (int a = 0; a < n; ++a) {
        Expr da = differentiate(gij, chart.coords[a]);
        double v1 = evaluate(da, b);
        jet.dg(a, i, j) = v1;
        jet.dg(a, j, i) = v1;
        if (order < 2) continue;
        for (int c = a; c < n; ++c) {
          Expr dac = differentiate(da, chart.coords[c]);
          double v2 = evaluate(dac, b);
          for_permutations({a, c}, [&](const std::vector<int>& q) {
            jet.d2g(q[0], q[1], i, j) = v2;
            jet.d2g(q[0], q[1], j, i) = v2;
          });
          if (order < 3) continue;
          for (int d = c; d < n; ++d) {
            Expr dacd = differentiate(dac, chart.coords[d]);
            double v3 = evaluate(dacd, b);
            for_permutations({a, c, d}, [&](const std::vector<int>& q) {
              jet.d3g(q[0], q[1], q[2], i, j) = v3;
              jet.d3g(q[0], q[1], q[2], j, i) = v3;
            });
            if (order < 4) continue;
            for (int e = d; e < n; ++e) {
              Expr dacde = differentiate(dacd, chart.coords[e]);
              double v4 = evaluate(dacde, b);
              for_permutations({a, c, d, e}, [&](const std::vector<int>& q) {
                jet.d4g(q[0], q[1], q[2], q[3], i, j) = v4;
                jet.d4g(q[0], q[1], q[2], q[3], j, i) = v4;
              });
            }
          }
        }
      }
    }
  }
  return jet;
}

MetricJet fd_metric_jet(const Chart& chart, const Eigen::VectorXd& p,
                        int order, double h) {
  if (order > 2)
    throw Error("finite-difference metric jet supports order <= 2");
  const int n = chart.n;
  MetricJet jet;
  jet.n = n;
  jet.order = order;
  jet.point = p;

  auto comp = [&](int i, int j, const Eigen::VectorXd& q) {
    return eval_component(chart, i, j, chart.binding_at(q));
  };

  jet.g.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) jet.g(i, j) = comp(i, j, p);

  // 4th-order central stencils.
  const std::array<int, 4> off1 = {-2, -1, 1, 2};
  const std::array<double, 4> w1 = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};

  if (order >= 1) {
    jet.dg = TensorData<double>(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int a = 0; a < n; ++a) {
          double acc = 0.0;
          for (int s = 0; s < 4; ++s) {
            Eigen::VectorXd q = p;
            q[a] += off1[s] * h;
            acc += w1[s] * comp(i, j, q);
          }
          jet.dg(a, i, j) = acc / h;
          jet.dg(a, j, i) = acc / h;
        }
  }

  if (order >= 2) {
    jet.d2g = TensorData<double>(n, 4);
    const std::array<int, 5> off2 = {-2, -1, 0, 1, 2};
    const std::array<double, 5> w2 = {-1.0 / 12, 16.0 / 12, -30.0 / 12,
                                      16.0 / 12, -1.0 / 12};
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int a = 0; a < n; ++a)
          for (int c = a; c < n; ++c) {
            double acc = 0.0;
            if (a == c) {
              for (int s = 0; s < 5; ++s) {
                Eigen::VectorXd q = p;
                q[a] += off2[s] * h;
                acc += w2[s] * comp(i, j, q);
              }
              acc /= h * h;
            } else {
              for (int s = 0; s < 4; ++s)
                for (int t = 0; t < 4; ++t) {
                  Eigen::VectorXd q = p;
                  q[a] += off1[s] * h;
                  q[c] += off1[t] * h;
                  acc += w1[s] * w1[t] * comp(i, j, q);
                }
              acc /= h * h;
            }
            for_permutations({a, c}, [&](const std::vector<int>& q) {
              jet.d2g(q[0], q[1], i, j) = acc;
              jet.d2g(q[0], q[1], j, i) = acc;
            });
          }
  }
  return jet;
}

void validate_metric(const Eigen::MatrixXd& g, Eigen::MatrixXd& ginv,
                     double& det) {
  const int n = static_cast<int>(g.rows());
  const double scale = 1.0 + g.cwiseAbs().maxCoeff();
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ChartError("malformed chart: evaluated metric is not symmetric");

  // Sylvester criterion: every leading principal minor positive.
  for (int k = 1; k <= n; ++k) {
    double minor = g.topLeftCorner(k, k).determinant();
    if (!(minor > 0.0))
      throw DegenerateMetricError(
          "metric is not positive definite (leading principal minor " +
          std::to_string(k) + " is non-positive)");
  }
  det = g.determinant();
  if (det <= 1e-12)
    throw DegenerateMetricError("metric is degenerate (det <= 1e-12)");

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(g);
  ginv = lu.solve(Eigen::MatrixXd::Identity(n, n));
  double resid = (g * ginv - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (resid > 1e-10)
    throw DegenerateMetricError(
        "metric inverse failed the g*ginv = identity check");
}

CurvatureJets curvature_jets(const Chart& chart, const Eigen::VectorXd& p,
                             int order) {
  return curvature_jets(symbolic_metric_jet(chart, p, order));
}

CurvatureJets curvature_jets(const MetricJet& mj) {
  const int n = mj.n;
  const int order = mj.order;
  CurvatureJets cj;
  cj.n = n;
  cj.order = order;
  cj.point = mj.point;
  cj.g = mj.g;
  cj.dg = mj.dg;
  cj.d2g = mj.d2g;
  cj.d3g = mj.d3g;
  cj.d4g = mj.d4g;

  validate_metric(cj.g, cj.ginv, cj.det);
  if (order < 1) return cj;

  const auto& g = cj.g;
  const auto& gi = cj.ginv;
  const auto& dg = cj.dg;
  const auto& d2g = cj.d2g;
  const auto& d3g = cj.d3g;
  const auto& d4g = cj.d4g;

  // Derivatives of the inverse metric: d(ginv) = -ginv dg ginv, iterated.
  auto mat_dg = [&](int a) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = dg(a, i, j);
    return m;
  };
  auto mat_d2g = [&](int a, int b) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = d2g(a, b, i, j);
    return m;
  };
  auto mat_d3g = [&](int a, int b, int c) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = d3g(a, b, c, i, j);
    return m;
  };

  std::vector<Eigen::MatrixXd> dgi(n);
  std::vector<std::vector<Eigen::MatrixXd>> d2gi;
  std::vector<std::vector<std::vector<Eigen::MatrixXd>>> d3gi;

  cj.dginv = TensorData<double>(n, 3);
  for (int a = 0; a < n; ++a) {
    dgi[a] = -gi * mat_dg(a) * gi;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cj.dginv(a, i, j) = dgi[a](i, j);
  }

  if (order >= 2) {
    cj.d2ginv = TensorData<double>(n, 4);
    d2gi.assign(n, std::vector<Eigen::MatrixXd>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        d2gi[a][b] = -(dgi[b] * mat_dg(a) * gi + gi * mat_d2g(a, b) * gi +
                       gi * mat_dg(a) * dgi[b]);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) cj.d2ginv(a, b, i, j) = d2gi[a][b](i, j);
      }
  }

  if (order >= 3) {
    cj.d3ginv = TensorData<double>(n, 5);
    d3gi.assign(n, std::vector<std::vector<Eigen::MatrixXd>>(
                       n, std::vector<Eigen::MatrixXd>(n)));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          d3gi[a][b][c] =
              -(d2gi[b][c] * mat_dg(a) * gi + dgi[b] * mat_d2g(a, c) * gi +
                dgi[b] * mat_dg(a) * dgi[c] + dgi[c] * mat_d2g(a, b) * gi +
                gi * mat_d3g(a, b, c) * gi + gi * mat_d2g(a, b) * dgi[c] +
                dgi[c] * mat_dg(a) * dgi[b] + gi * mat_d2g(a, c) * dgi[b] +
                gi * mat_dg(a) * d2gi[b][c]);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              cj.d3ginv(a, b, c, i, j) = d3gi[a][b][c](i, j);
        }
  }

  // Christoffel symbols of the first kind and their partials.
  auto lo = [&](int l, int i, int j) {
    return 0.5 * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
  };
  auto lo1 = [&](int a, int l, int i, int j) {
    return 0.5 * (d2g(a, i, j, l) + d2g(a, j, i, l) - d2g(a, l, i, j));
  };
  auto lo2 = [&](int a, int b, int l, int i, int j) {
    return 0.5 * (d3g(a, b, i, j, l) + d3g(a, b, j, i, l) - d3g(a, b, l, i, j));
  };
  auto lo3 = [&](int a, int b, int c, int l, int i, int j) {
    return 0.5 *
           (d4g(a, b, c, i, j, l) + d4g(a, b, c, j, i, l) - d4g(a, b, c, l, i, j));
  };

  cj.gamma = TensorData<double>(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) acc += gi(k, l) * lo(l, i, j);
        cj.gamma(k, i, j) = acc;
      }

  if (order >= 2) {
    cj.dgamma = TensorData<double>(n, 4);
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int l = 0; l < n; ++l)
              acc += cj.dginv(a, k, l) * lo(l, i, j) + gi(k, l) * lo1(a, l, i, j);
            cj.dgamma(a, k, i, j) = acc;
          }
  }

  if (order >= 3) {
    cj.d2gamma = TensorData<double>(n, 5);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              double acc = 0.0;
              for (int l = 0; l < n; ++l)
                acc += cj.d2ginv(a, b, k, l) * lo(l, i, j) +
                       cj.dginv(a, k, l) * lo1(b, l, i, j) +
                       cj.dginv(b, k, l) * lo1(a, l, i, j) +
                       gi(k, l) * lo2(a, b, l, i, j);
              cj.d2gamma(a, b, k, i, j) = acc;
            }
  }

  if (order >= 4) {
    cj.d3gamma = TensorData<double>(n, 6);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                  acc += cj.d3ginv(a, b, c, k, l) * lo(l, i, j) +
                         cj.d2ginv(a, b, k, l) * lo1(c, l, i, j) +
                         cj.d2ginv(a, c, k, l) * lo1(b, l, i, j) +
                         cj.d2ginv(b, c, k, l) * lo1(a, l, i, j) +
                         cj.dginv(a, k, l) * lo2(b, c, l, i, j) +
                         cj.dginv(b, k, l) * lo2(a, c, l, i, j) +
                         cj.dginv(c, k, l) * lo2(a, b, l, i, j) +
                         gi(k, l) * lo3(a, b, c, l, i, j);
                cj.d3gamma(a, b, c, k, i, j) = acc;
              }
  }

  if (order < 2) return cj;

  // Coefficient of R(d_i, d_j) d_k in the d_m basis, and its partials.
  TensorData<double> rup(n, 4);  // (m, k, i, j)
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double acc = cj.dgamma(i, m, j, k) - cj.dgamma(j, m, i, k);
          for (int al = 0; al < n; ++al)
            acc += cj.gamma(m, i, al) * cj.gamma(al, j, k) -
                   cj.gamma(m, j, al) * cj.gamma(al, i, k);
          rup(m, k, i, j) = acc;
        }

  cj.riem = TensorData<double>(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int m = 0; m < n; ++m) acc += g(l, m) * rup(m, k, j, i);
          cj.riem(i, j, k, l) = acc;
        }

  cj.ric.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) acc += gi(i, k) * cj.riem(i, j, k, l);
      cj.ric(j, l) = acc;
    }

  cj.R = 0.0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) cj.R += gi(j, l) * cj.ric(j, l);

  if (order < 3) return cj;

  TensorData<double> drup(n, 5);  // (a; m, k, i, j)
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double acc = cj.d2gamma(a, i, m, j, k) - cj.d2gamma(a, j, m, i, k);
            for (int al = 0; al < n; ++al)
              acc += cj.dgamma(a, m, i, al) * cj.gamma(al, j, k) +
                     cj.gamma(m, i, al) * cj.dgamma(a, al, j, k) -
                     cj.dgamma(a, m, j, al) * cj.gamma(al, i, k) -
                     cj.gamma(m, j, al) * cj.dgamma(a, al, i, k);
            drup(a, m, k, i, j) = acc;
          }

  cj.driem = TensorData<double>(n, 5);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double acc = 0.0;
            for (int m = 0; m < n; ++m)
              acc += dg(a, l, m) * rup(m, k, j, i) + g(l, m) * drup(a, m, k, j, i);
            cj.driem(a, i, j, k, l) = acc;
          }

  cj.dric = TensorData<double>(n, 3);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            acc += cj.dginv(a, i, k) * cj.riem(i, j, k, l) +
                   gi(i, k) * cj.driem(a, i, j, k, l);
        cj.dric(a, j, l) = acc;
      }

  cj.dR.resize(n);
  for (int a = 0; a < n; ++a) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        acc += cj.dginv(a, j, l) * cj.ric(j, l) + gi(j, l) * cj.dric(a, j, l);
    cj.dR[a] = acc;
  }

  if (order < 4) return cj;

  TensorData<double> d2rup(n, 6);  // (a, b; m, k, i, j)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              double acc =
                  cj.d3gamma(a, b, i, m, j, k) - cj.d3gamma(a, b, j, m, i, k);
              for (int al = 0; al < n; ++al)
                acc += cj.d2gamma(a, b, m, i, al) * cj.gamma(al, j, k) +
                       cj.dgamma(a, m, i, al) * cj.dgamma(b, al, j, k) +
                       cj.dgamma(b, m, i, al) * cj.dgamma(a, al, j, k) +
                       cj.gamma(m, i, al) * cj.d2gamma(a, b, al, j, k) -
                       cj.d2gamma(a, b, m, j, al) * cj.gamma(al, i, k) -
                       cj.dgamma(a, m, j, al) * cj.dgamma(b, al, i, k) -
                       cj.dgamma(b, m, j, al) * cj.dgamma(a, al, i, k) -
                       cj.gamma(m, j, al) * cj.d2gamma(a, b, al, i, k);
              d2rup(a, b, m, k, i, j) = acc;
            }

  cj.d2riem = TensorData<double>(n, 6);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              double acc = 0.0;
              for (int m = 0; m < n; ++m)
                acc += d2g(a, b, l, m) * rup(m, k, j, i) +
                       dg(a, l, m) * drup(b, m, k, j, i) +
                       dg(b, l, m) * drup(a, m, k, j, i) +
                       g(l, m) * d2rup(a, b, m, k, j, i);
              cj.d2riem(a, b, i, j, k, l) = acc;
            }

  cj.d2ric = TensorData<double>(n, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
              acc += cj.d2ginv(a, b, i, k) * cj.riem(i, j, k, l) +
                     cj.dginv(a, i, k) * cj.driem(b, i, j, k, l) +
                     cj.dginv(b, i, k) * cj.driem(a, i, j, k, l) +
                     gi(i, k) * cj.d2riem(a, b, i, j, k, l);
          cj.d2ric(a, b, j, l) = acc;
        }

  cj.d2R.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          acc += cj.d2ginv(a, b, j, l) * cj.ric(j, l) +
                 cj.dginv(a, j, l) * cj.dric(b, j, l) +
                 cj.dginv(b, j, l) * cj.dric(a, j, l) +
                 gi(j, l) * cj.d2ric(a, b, j, l);
      cj.d2R(a, b) = acc;
    }

  return cj;
}

double CurvatureJets::ricci_norm2() const {
  double acc = 0.0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q)
          acc += ric(j, l) * ric(m, q) * ginv(j, m) * ginv(l, q);
  return acc;
}

ScalarJet scalar_jet(const Expr& f, const Chart& chart,
                     const Eigen::VectorXd& p, int order) {
  const VarBinding b = chart.binding_at(p);
  const int n = chart.n;
  ScalarJet sj;
  sj.v = evaluate(f, b);
  if (order >= 1) {
    sj.d1.resize(n);
    std::vector<Expr> d1(n, Expr::constant(0.0));
    for (int a = 0; a < n; ++a) {
      d1[a] = differentiate(f, chart.coords[a]);
      sj.d1[a] = evaluate(d1[a], b);
    }
    if (order >= 2) {
      sj.d2.resize(n, n);
      for (int a = 0; a < n; ++a)
        for (int c = a; c < n; ++c) {
          double v = evaluate(differentiate(d1[a], chart.coords[c]), b);
          sj.d2(a, c) = v;
          sj.d2(c, a) = v;
        }
    }
  }
  return sj;
}

double gnorm_covector(const Eigen::MatrixXd& ginv, const Eigen::VectorXd& v) {
  return std::sqrt(std::max(0.0, v.dot(ginv * v)));
}

double gnorm_tensor2(const Eigen::MatrixXd& ginv, const Eigen::MatrixXd& t) {
  const int n = static_cast<int>(ginv.rows());
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          acc += t(i, j) * t(a, b) * ginv(i, a) * ginv(j, b);
  return std::sqrt(std::max(0.0, acc));
}

double gnorm_tensor3(const Eigen::MatrixXd& ginv, const TensorData<double>& t) {
  const int n = t.dim();
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              acc += t(i, j, k) * t(a, b, c) * ginv(i, a) * ginv(j, b) *
                     ginv(k, c);
  return std::sqrt(std::max(0.0, acc));
}

double gnorm_tensor4(const Eigen::MatrixXd& ginv, const TensorData<double>& t) {
  const int n = t.dim();
  // Raise one slot at a time to keep this O(n^5) instead of O(n^8).
  TensorData<double> cur = t;
  for (int slot = 0; slot < 4; ++slot) {
    TensorData<double> next(n, 4);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const int outer[4] = {i, j, k, l};
            int idx[4] = {i, j, k, l};
            double acc = 0.0;
            for (int m = 0; m < n; ++m) {
              idx[slot] = m;
              acc += ginv(outer[slot], m) * cur(idx[0], idx[1], idx[2], idx[3]);
            }
            next(i, j, k, l) = acc;
          }
    cur = next;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += cur.flat(i) * t.flat(i);
  return std::sqrt(std::max(0.0, acc));
}

}  // namespace schouten
