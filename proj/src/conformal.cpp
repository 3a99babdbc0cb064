#include "schouten/conformal.hpp"

#include <array>
#include <cmath>

#include "schouten/errors.hpp"

namespace schouten {

namespace {

void require_dim(const Chart& chart, int min) {
  if (chart.n < min)
    throw ChartError("operation requires dimension >= " + std::to_string(min));
}

double max_abs(const TensorData<double>& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    m = std::max(m, std::abs(t.flat(i)));
  return m;
}

// grad_a Ric_jk at the jet level.
TensorData<double> nabla_ric(const CurvatureJets& cj) {
  const int n = cj.n;
  TensorData<double> out(n, 3);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = cj.dric(a, j, k);
        for (int m = 0; m < n; ++m)
          acc -= cj.gamma(m, a, j) * cj.ric(m, k) +
                 cj.gamma(m, a, k) * cj.ric(j, m);
        out(a, j, k) = acc;
      }
  return out;
}

// d_b (grad_a Ric_jk).
TensorData<double> d_nabla_ric(const CurvatureJets& cj) {
  const int n = cj.n;
  TensorData<double> out(n, 4);  // (b, a; j, k)
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = cj.d2ric(b, a, j, k);
          for (int m = 0; m < n; ++m)
            acc -= cj.dgamma(b, m, a, j) * cj.ric(m, k) +
                   cj.gamma(m, a, j) * cj.dric(b, m, k) +
                   cj.dgamma(b, m, a, k) * cj.ric(j, m) +
                   cj.gamma(m, a, k) * cj.dric(b, j, m);
          out(b, a, j, k) = acc;
        }
  return out;
}

TensorData<double> cotton_impl(const CurvatureJets& cj,
                               const TensorData<double>& nric) {
  const int n = cj.n;
  const double c = 1.0 / (2.0 * (n - 1));
  TensorData<double> C(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        C(i, j, k) = nric(i, j, k) - nric(j, i, k) -
                     c * (cj.g(j, k) * cj.dR[i] - cj.g(i, k) * cj.dR[j]);
  return C;
}

// d_a C_ijk.
TensorData<double> d_cotton(const CurvatureJets& cj,
                            const TensorData<double>& dnric) {
  const int n = cj.n;
  const double c = 1.0 / (2.0 * (n - 1));
  TensorData<double> out(n, 4);  // (a; i, j, k)
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out(a, i, j, k) =
              dnric(a, i, j, k) - dnric(a, j, i, k) -
              c * (cj.dg(a, j, k) * cj.dR[i] + cj.g(j, k) * cj.d2R(a, i) -
                   cj.dg(a, i, k) * cj.dR[j] - cj.g(i, k) * cj.d2R(a, j));
  return out;
}

// grad_a C_ijk.
TensorData<double> nabla_cotton(const CurvatureJets& cj,
                                const TensorData<double>& C,
                                const TensorData<double>& dC) {
  const int n = cj.n;
  TensorData<double> out(n, 4);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = dC(a, i, j, k);
          for (int m = 0; m < n; ++m)
            acc -= cj.gamma(m, a, i) * C(m, j, k) +
                   cj.gamma(m, a, j) * C(i, m, k) +
                   cj.gamma(m, a, k) * C(i, j, m);
          out(a, i, j, k) = acc;
        }
  return out;
}

TensorData<double> weyl_impl(const CurvatureJets& cj) {
  const int n = cj.n;
  const double c1 = 1.0 / (n - 2);
  const double c2 = 1.0 / ((n - 1) * (n - 2));
  TensorData<double> W(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          W(i, j, k, l) =
              cj.riem(i, j, k, l) -
              c1 * (cj.g(i, k) * cj.ric(j, l) - cj.g(i, l) * cj.ric(j, k) -
                    cj.g(j, k) * cj.ric(i, l) + cj.g(j, l) * cj.ric(i, k)) +
              c2 * cj.R *
                  (cj.g(i, k) * cj.g(j, l) - cj.g(i, l) * cj.g(j, k));
  return W;
}

TensorData<double> d_weyl(const CurvatureJets& cj) {
  const int n = cj.n;
  const double c1 = 1.0 / (n - 2);
  const double c2 = 1.0 / ((n - 1) * (n - 2));
  TensorData<double> out(n, 5);  // (a; i, j, k, l)
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            out(a, i, j, k, l) =
                cj.driem(a, i, j, k, l) -
                c1 * (cj.dg(a, i, k) * cj.ric(j, l) +
                      cj.g(i, k) * cj.dric(a, j, l) -
                      cj.dg(a, i, l) * cj.ric(j, k) -
                      cj.g(i, l) * cj.dric(a, j, k) -
                      cj.dg(a, j, k) * cj.ric(i, l) -
                      cj.g(j, k) * cj.dric(a, i, l) +
                      cj.dg(a, j, l) * cj.ric(i, k) +
                      cj.g(j, l) * cj.dric(a, i, k)) +
                c2 * (cj.dR[a] * (cj.g(i, k) * cj.g(j, l) -
                                  cj.g(i, l) * cj.g(j, k)) +
                      cj.R * (cj.dg(a, i, k) * cj.g(j, l) +
                              cj.g(i, k) * cj.dg(a, j, l) -
                              cj.dg(a, i, l) * cj.g(j, k) -
                              cj.g(i, l) * cj.dg(a, j, k)));
  return out;
}

TensorData<double> d2_weyl(const CurvatureJets& cj) {
  const int n = cj.n;
  const double c1 = 1.0 / (n - 2);
  const double c2 = 1.0 / ((n - 1) * (n - 2));
  TensorData<double> out(n, 6);  // (a, b; i, j, k, l)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              auto prod2 = [&](auto gval, auto dga, auto dgb, auto d2gab,
                               auto rval, auto dra, auto drb, auto d2rab) {
                return d2gab * rval + dga * drb + dgb * dra + gval * d2rab;
              };
              double t_gr =
                  prod2(cj.g(i, k), cj.dg(a, i, k), cj.dg(b, i, k),
                        cj.d2g(a, b, i, k), cj.ric(j, l), cj.dric(a, j, l),
                        cj.dric(b, j, l), cj.d2ric(a, b, j, l)) -
                  prod2(cj.g(i, l), cj.dg(a, i, l), cj.dg(b, i, l),
                        cj.d2g(a, b, i, l), cj.ric(j, k), cj.dric(a, j, k),
                        cj.dric(b, j, k), cj.d2ric(a, b, j, k)) -
                  prod2(cj.g(j, k), cj.dg(a, j, k), cj.dg(b, j, k),
                        cj.d2g(a, b, j, k), cj.ric(i, l), cj.dric(a, i, l),
                        cj.dric(b, i, l), cj.d2ric(a, b, i, l)) +
                  prod2(cj.g(j, l), cj.dg(a, j, l), cj.dg(b, j, l),
                        cj.d2g(a, b, j, l), cj.ric(i, k), cj.dric(a, i, k),
                        cj.dric(b, i, k), cj.d2ric(a, b, i, k));
              // d_a d_b of g_ik g_jl - g_il g_jk
              double gg = cj.g(i, k) * cj.g(j, l) - cj.g(i, l) * cj.g(j, k);
              double dgg_a = cj.dg(a, i, k) * cj.g(j, l) +
                             cj.g(i, k) * cj.dg(a, j, l) -
                             cj.dg(a, i, l) * cj.g(j, k) -
                             cj.g(i, l) * cj.dg(a, j, k);
              double dgg_b = cj.dg(b, i, k) * cj.g(j, l) +
                             cj.g(i, k) * cj.dg(b, j, l) -
                             cj.dg(b, i, l) * cj.g(j, k) -
                             cj.g(i, l) * cj.dg(b, j, k);
              double d2gg =
                  cj.d2g(a, b, i, k) * cj.g(j, l) +
                  cj.dg(a, i, k) * cj.dg(b, j, l) +
                  cj.dg(b, i, k) * cj.dg(a, j, l) +
                  cj.g(i, k) * cj.d2g(a, b, j, l) -
                  cj.d2g(a, b, i, l) * cj.g(j, k) -
                  cj.dg(a, i, l) * cj.dg(b, j, k) -
                  cj.dg(b, i, l) * cj.dg(a, j, k) -
                  cj.g(i, l) * cj.d2g(a, b, j, k);
              double t_Rgg = cj.d2R(a, b) * gg + cj.dR[a] * dgg_b +
                             cj.dR[b] * dgg_a + cj.R * d2gg;
              out(a, b, i, j, k, l) =
                  cj.d2riem(a, b, i, j, k, l) - c1 * t_gr + c2 * t_Rgg;
            }
  return out;
}

// Ric_kl W_i^k_j^l with both Weyl slots raised by ginv.
Eigen::MatrixXd ric_weyl_term(const CurvatureJets& cj,
                              const TensorData<double>& W) {
  const int n = cj.n;
  // Raised Ricci: Ric^{mp} = ginv^{mk} ginv^{pl} Ric_kl.
  Eigen::MatrixXd ricup = cj.ginv * cj.ric * cj.ginv;
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int m = 0; m < n; ++m)
        for (int p = 0; p < n; ++p) acc += ricup(m, p) * W(i, m, j, p);
      out(i, j) = acc;
    }
  return out;
}

Eigen::MatrixXd bach_cotton_route(const CurvatureJets& cj) {
  const int n = cj.n;
  TensorData<double> nric = nabla_ric(cj);
  TensorData<double> dnric = d_nabla_ric(cj);
  TensorData<double> C = cotton_impl(cj, nric);
  TensorData<double> dC = d_cotton(cj, dnric);
  TensorData<double> nC = nabla_cotton(cj, C, dC);

  Eigen::MatrixXd divC(n, n);  // grad^k C_kij
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a) acc += cj.ginv(k, a) * nC(a, k, i, j);
      divC(i, j) = acc;
    }

  if (n == 3) return divC;
  TensorData<double> W = weyl_impl(cj);
  return (divC + ric_weyl_term(cj, W)) / static_cast<double>(n - 2);
}

Eigen::MatrixXd bach_weyl_route(const CurvatureJets& cj) {
  const int n = cj.n;
  TensorData<double> W = weyl_impl(cj);
  TensorData<double> dW = d_weyl(cj);
  TensorData<double> d2W = d2_weyl(cj);

  // First covariant derivative grad_a W_ijkl.
  TensorData<double> nW(n, 5);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double acc = dW(a, i, j, k, l);
            for (int m = 0; m < n; ++m)
              acc -= cj.gamma(m, a, i) * W(m, j, k, l) +
                     cj.gamma(m, a, j) * W(i, m, k, l) +
                     cj.gamma(m, a, k) * W(i, j, m, l) +
                     cj.gamma(m, a, l) * W(i, j, k, m);
            nW(a, i, j, k, l) = acc;
          }

  // d_b (grad_a W_ijkl).
  TensorData<double> dnW(n, 6);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              double acc = d2W(b, a, i, j, k, l);
              for (int m = 0; m < n; ++m)
                acc -= cj.dgamma(b, m, a, i) * W(m, j, k, l) +
                       cj.gamma(m, a, i) * dW(b, m, j, k, l) +
                       cj.dgamma(b, m, a, j) * W(i, m, k, l) +
                       cj.gamma(m, a, j) * dW(b, i, m, k, l) +
                       cj.dgamma(b, m, a, k) * W(i, j, m, l) +
                       cj.gamma(m, a, k) * dW(b, i, j, m, l) +
                       cj.dgamma(b, m, a, l) * W(i, j, k, m) +
                       cj.gamma(m, a, l) * dW(b, i, j, k, m);
              dnW(b, a, i, j, k, l) = acc;
            }

  // Second covariant derivative grad_b grad_a W_ijkl.
  TensorData<double> n2W(n, 6);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              double acc = dnW(b, a, i, j, k, l);
              for (int m = 0; m < n; ++m)
                acc -= cj.gamma(m, b, a) * nW(m, i, j, k, l) +
                       cj.gamma(m, b, i) * nW(a, m, j, k, l) +
                       cj.gamma(m, b, j) * nW(a, i, m, k, l) +
                       cj.gamma(m, b, k) * nW(a, i, j, m, l) +
                       cj.gamma(m, b, l) * nW(a, i, j, k, m);
              n2W(b, a, i, j, k, l) = acc;
            }

  // grad^k grad^l W_ikjl: inner derivative pairs with l, outer with k.
  Eigen::MatrixXd ddW(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a)
              acc += cj.ginv(k, b) * cj.ginv(l, a) * n2W(b, a, i, k, j, l);
      ddW(i, j) = acc;
    }

  return ddW / static_cast<double>(n - 3) +
         ric_weyl_term(cj, W) / static_cast<double>(n - 2);
}

}  // namespace

TensorData<double> weyl_from_jets(const CurvatureJets& cj) {
  return weyl_impl(cj);
}

TensorData<double> cotton_from_jets(const CurvatureJets& cj) {
  return cotton_impl(cj, nabla_ric(cj));
}

Eigen::MatrixXd bach_from_jets(const CurvatureJets& cj) {
  if (cj.n == 3) return bach_cotton_route(cj);
  Eigen::MatrixXd b19 = bach_cotton_route(cj);
  Eigen::MatrixXd b18 = bach_weyl_route(cj);
  // The comparison floor is the curvature^2 scale both routes are built
  // from; below it a vanishing Bach tensor is cancellation noise, while a
  // convention fault shows up as an O(curvature^2) disagreement.
  double curv = std::abs(cj.R) + max_abs(cj.riem);
  double floor = 1e-6 * (1.0 + curv * curv);
  double scale = std::max({floor, b18.cwiseAbs().maxCoeff(),
                           b19.cwiseAbs().maxCoeff()});
  double diff = (b18 - b19).cwiseAbs().maxCoeff();
  if (diff > 1e-6 * scale)
    throw ConventionError(
        "Bach tensor routes disagree (relative " + std::to_string(diff / scale) +
        "); curvature conventions are inconsistent");
  return b19;
}

TensorData<double> weyl(const Chart& chart, const Eigen::VectorXd& p) {
  require_dim(chart, 3);
  return weyl_impl(curvature_jets(chart, p, 2));
}

TensorData<double> cotton(const Chart& chart, const Eigen::VectorXd& p) {
  require_dim(chart, 3);
  CurvatureJets cj = curvature_jets(chart, p, 3);
  return cotton_impl(cj, nabla_ric(cj));
}

Eigen::MatrixXd bach(const Chart& chart, const Eigen::VectorXd& p) {
  require_dim(chart, 3);
  return bach_from_jets(curvature_jets(chart, p, 4));
}

Eigen::MatrixXd bach_via_weyl(const Chart& chart, const Eigen::VectorXd& p) {
  require_dim(chart, 4);
  return bach_weyl_route(curvature_jets(chart, p, 4));
}

Eigen::MatrixXd bach_via_cotton(const Chart& chart, const Eigen::VectorXd& p) {
  require_dim(chart, 3);
  return bach_cotton_route(curvature_jets(chart, p, 4));
}

Eigen::VectorXd div_bach(const Chart& chart, const Eigen::VectorXd& p) {
  if (chart.n != 3)
    throw ChartError("div_bach is defined for dimension 3 only");
  CurvatureJets cj = curvature_jets(chart, p, 3);
  TensorData<double> C = cotton_impl(cj, nabla_ric(cj));
  Eigen::MatrixXd ricup = cj.ginv * cj.ric * cj.ginv;
  Eigen::VectorXd out(3);
  for (int j = 0; j < 3; ++j) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int l = 0; l < 3; ++l) acc -= ricup(i, l) * C(j, i, l);
    out[j] = acc;
  }
  return out;
}

Eigen::VectorXd div_bach_direct(const Chart& chart, const Eigen::VectorXd& p,
                                double h) {
  if (chart.n != 3)
    throw ChartError("div_bach is defined for dimension 3 only");
  const int n = 3;
  CurvatureJets cj = curvature_jets(chart, p, 4);
  Eigen::MatrixXd B = bach_from_jets(cj);

  // d_a B_ij by 4th-order central differences of the exact Bach tensor.
  const std::array<int, 4> off = {-2, -1, 1, 2};
  const std::array<double, 4> w = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
  std::vector<Eigen::MatrixXd> dB(n);
  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < 4; ++s) {
      Eigen::VectorXd q = p;
      q[a] += off[s] * h;
      acc += w[s] * bach_from_jets(curvature_jets(chart, q, 4));
    }
    dB[a] = acc / h;
  }

  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double nab = dB[a](b, j);
        for (int m = 0; m < n; ++m)
          nab -= cj.gamma(m, a, b) * B(m, j) + cj.gamma(m, a, j) * B(b, m);
        acc += cj.ginv(a, b) * nab;
      }
    out[j] = acc;
  }
  return out;
}

ConformalPack conformal_pack(const Chart& chart, const Eigen::VectorXd& p) {
  require_dim(chart, 3);
  const int n = chart.n;
  CurvatureJets cj = curvature_jets(chart, p, 4);
  ConformalPack pk;
  pk.point = p;
  pk.weyl = weyl_impl(cj);
  pk.cotton = cotton_impl(cj, nabla_ric(cj));
  pk.bach = bach_from_jets(cj);
  if (n == 3) pk.div_bach = div_bach(chart, p);

  // Structural invariants; violations indicate a pipeline fault.
  double wscale = 1.0 + max_abs(pk.weyl);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double tr = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) tr += cj.ginv(i, k) * pk.weyl(i, j, k, l);
      if (std::abs(tr) > 1e-8 * wscale)
        throw Error("conformal pipeline fault: Weyl tensor not trace-free");
    }
  double cscale = 1.0 + max_abs(pk.cotton);
  for (int i = 0; i < n; ++i) {
    double tr = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) tr += cj.ginv(j, k) * pk.cotton(i, j, k);
    if (std::abs(tr) > 1e-8 * cscale)
      throw Error("conformal pipeline fault: Cotton tensor not trace-free");
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (std::abs(pk.cotton(i, j, k) + pk.cotton(j, i, k)) > 1e-8 * cscale)
          throw Error("conformal pipeline fault: Cotton tensor not antisymmetric");
  }
  double bscale = 1.0 + pk.bach.cwiseAbs().maxCoeff();
  if ((pk.bach - pk.bach.transpose()).cwiseAbs().maxCoeff() > 1e-7 * bscale)
    throw Error("conformal pipeline fault: Bach tensor not symmetric");
  if (n >= 4) {
    double tr = (cj.ginv * pk.bach).trace();
    if (std::abs(tr) > 1e-7 * bscale)
      throw Error("conformal pipeline fault: Bach tensor not trace-free");
  }
  return pk;
}

}  // namespace schouten
