#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "schouten/geometry.hpp"
#include "schouten/rigid.hpp"
#include "support.hpp"

using namespace schouten;
using schouten::testing::random_polynomial_chart;

namespace {

const double kPi = 3.14159265358979323846;

Chart polar_plane() {
  return Chart::from_upper_triangle(
      {"r", "ph"},
      {{parse_expr("1"), Expr::constant(0)},
       {Expr::constant(0), parse_expr("r^2")}},
      {{0.5, 2.0}, {0.2, 3.0}});
}

Eigen::VectorXd vec(std::initializer_list<double> vs) {
  Eigen::VectorXd p(static_cast<int>(vs.size()));
  int i = 0;
  for (double v : vs) p[i++] = v;
  return p;
}

}  // namespace

TEST_CASE("metric_at on the flat chart gives identities") {
  Chart ch = flat_chart(3);
  MetricValues mv = metric_at(ch, vec({0.3, -1.0, 0.7}));
  CHECK((mv.g - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((mv.g_inv - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK(mv.det == doctest::Approx(1.0));
}

TEST_CASE("round sphere metric at the equator") {
  Chart s2 = sphere_chart(2, 1.0);
  MetricValues mv = metric_at(s2, vec({kPi / 2, 1.0}));
  CHECK(mv.g(0, 0) == doctest::Approx(1.0));
  CHECK(mv.g(1, 1) == doctest::Approx(1.0));
  CHECK(mv.g(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("asymmetric metric expressions are a malformed chart") {
  Chart ch = flat_chart(2);
  ch.g[0][1] = parse_expr("x1");      // perturb one triangle only
  ch.g[1][0] = parse_expr("x1 + 1");
  CHECK_THROWS_AS(metric_at(ch, vec({0.4, 0.2})), ChartError);
}

TEST_CASE("non-positive-definite metrics are rejected") {
  Chart ch = flat_chart(2);
  ch.g[0][0] = parse_expr("-1");
  CHECK_THROWS_AS(metric_at(ch, vec({0.0, 0.0})), DegenerateMetricError);

  Chart deg = flat_chart(2);
  deg.g[0][0] = parse_expr("x1");  // vanishes inside the box
  CHECK_THROWS_AS(metric_at(deg, vec({0.0, 0.0})), DegenerateMetricError);
}

TEST_CASE("christoffel symbols: flat, sphere, polar") {
  Chart flat = flat_chart(3);
  TensorValue gflat = christoffel(flat, vec({0.1, 0.2, 0.3}));
  for (std::size_t i = 0; i < gflat.comps.size(); ++i)
    CHECK(gflat.comps.flat(i) == 0.0);

  // Gamma^th_phph = -sin(th) cos(th) = -1/2 at th = pi/4.
  Chart s2 = sphere_chart(2, 1.0);
  TensorValue gs = christoffel(s2, vec({kPi / 4, 1.0}));
  CHECK(gs.comps(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(gs.comps(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));  // cot(pi/4)
  CHECK(gs.comps(1, 0, 1) == gs.comps(1, 1, 0));

  // Gamma^r_phph = -r on the polar plane; cross-checked below by FD.
  Chart polar = polar_plane();
  for (double r : {0.6, 1.0, 1.7}) {
    TensorValue gp = christoffel(polar, vec({r, 1.0}));
    CHECK(gp.comps(0, 1, 1) == doctest::Approx(-r).epsilon(1e-12));
  }
}

TEST_CASE("flat charts have zero curvature") {
  Chart flat = flat_chart(4);
  CurvaturePack pk = curvature_pack(flat, vec({0.1, -0.2, 0.5, 1.0}));
  for (std::size_t i = 0; i < pk.riemann.size(); ++i)
    CHECK(pk.riemann.flat(i) == 0.0);
  CHECK(pk.scalar == 0.0);
}

TEST_CASE("unit 2-sphere has scalar curvature +2 everywhere") {
  Chart s2 = sphere_chart(2, 1.0);
  for (const auto& p : sample_points(s2, 10, kDefaultSeed))
    CHECK(scalar_curvature(s2, p) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("product R x S^2 has Ricci eigenvalues {0, 1, 1}") {
  SolitonData cyl = build_rigid({3, 2, 0.5, FactorKind::Sphere});
  Eigen::VectorXd p = sample_points(cyl.chart, 1, 7)[0];
  CurvaturePack pk = curvature_pack(cyl.chart, p);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(pk.ricci, pk.g);
  CHECK(es.eigenvalues()[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(es.eigenvalues()[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(es.eigenvalues()[2] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pk.scalar == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("Riemann symmetries and first Bianchi on random charts") {
  for (int n : {3, 4, 5}) {
    Chart ch = random_polynomial_chart(n, 100 + n);
    for (const auto& p : sample_points(ch, 50, kDefaultSeed)) {
      CurvaturePack pk = curvature_pack(ch, p);  // construction also checks
      double scale = 1e-30;
      for (std::size_t i = 0; i < pk.riemann.size(); ++i)
        scale = std::max(scale, std::abs(pk.riemann.flat(i)));
      double tol = 1e-9 * (1 + scale);
      auto& R = pk.riemann;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              CHECK(std::abs(R(i, j, k, l) + R(j, i, k, l)) < tol);
              CHECK(std::abs(R(i, j, k, l) + R(i, j, l, k)) < tol);
              CHECK(std::abs(R(i, j, k, l) - R(k, l, i, j)) < tol);
              CHECK(std::abs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l)) <
                    tol);
            }
      CHECK((pk.ricci - pk.ricci.transpose()).cwiseAbs().maxCoeff() < tol);
      // R = g^{jk} Ric_jk
      CHECK(pk.scalar ==
            doctest::Approx((pk.g_inv * pk.ricci).trace()).epsilon(1e-10));
    }
  }
}

TEST_CASE("fixture charts pass the pack invariants at 50 points") {
  std::vector<RigidSpec> specs = {{3, 0, 1.0, FactorKind::None},
                                  {3, 2, 0.5, FactorKind::Sphere},
                                  {4, 3, 1.0, FactorKind::Sphere},
                                  {5, 2, 1.0, FactorKind::Sphere},
                                  {3, 2, -1.0, FactorKind::Hyperbolic}};
  for (const auto& spec : specs) {
    Chart ch = build_rigid(spec).chart;
    for (const auto& p : sample_points(ch, 50, kDefaultSeed))
      CHECK_NOTHROW(curvature_pack(ch, p));  // symmetry checks built in
  }
}

TEST_CASE("symbolic and finite-difference pipelines agree") {
  std::vector<Chart> charts = {random_polynomial_chart(3, 42),
                               sphere_chart(3, 1.3),
                               build_rigid({4, 3, 1.0, FactorKind::Sphere}).chart};
  for (const auto& ch : charts) {
    for (const auto& p : sample_points(ch, 5, kDefaultSeed)) {
      CurvaturePack a = curvature_pack(ch, p);
      CurvaturePack b = curvature_pack_fd(ch, p, 1e-2);
      double gscale = 1.0, gdiff = 0.0, rscale = 1.0, rdiff = 0.0;
      for (std::size_t i = 0; i < a.christoffel.size(); ++i) {
        gscale = std::max(gscale, std::abs(a.christoffel.flat(i)));
        gdiff = std::max(gdiff,
                         std::abs(a.christoffel.flat(i) - b.christoffel.flat(i)));
      }
      for (std::size_t i = 0; i < a.riemann.size(); ++i) {
        rscale = std::max(rscale, std::abs(a.riemann.flat(i)));
        rdiff =
            std::max(rdiff, std::abs(a.riemann.flat(i) - b.riemann.flat(i)));
      }
      CHECK(gdiff / gscale < 1e-6);
      CHECK(rdiff / rscale < 1e-6);
    }
  }
}

TEST_CASE("covariant derivative of a scalar is the coordinate gradient") {
  Chart flat = flat_chart(3);
  ExprTensor f;
  f.comps = TensorData<Expr>(3, 0);
  f.comps.flat(0) = parse_expr("x1^2 + 3*x2");
  TensorValue df = covariant_derivative(f, flat, vec({0.5, 0.1, -0.3}));
  CHECK(df.variance.size() == 1);
  CHECK(df.variance[0] == Slot::Lower);
  CHECK(df.comps(0) == doctest::Approx(1.0));
  CHECK(df.comps(1) == doctest::Approx(3.0));
  CHECK(df.comps(2) == doctest::Approx(0.0));
}

TEST_CASE("metric compatibility: covariant derivative of g vanishes") {
  for (int n : {2, 3}) {
    Chart ch = random_polynomial_chart(n, 500 + n);
    ExprTensor gfield;
    gfield.variance = {Slot::Lower, Slot::Lower};
    gfield.comps = TensorData<Expr>(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gfield.comps(i, j) = ch.g[i][j];
    for (const auto& p : sample_points(ch, 10, kDefaultSeed)) {
      TensorValue ng = covariant_derivative(gfield, ch, p);
      for (std::size_t i = 0; i < ng.comps.size(); ++i)
        CHECK(std::abs(ng.comps.flat(i)) < 1e-9);
    }
  }
}

TEST_CASE("covariant derivative with upper slots: ginv and delta are parallel") {
  // Polar plane: g^{-1} = diag(1, 1/r^2) in closed form.
  Chart polar = polar_plane();
  ExprTensor ginv;
  ginv.variance = {Slot::Upper, Slot::Upper};
  ginv.comps = TensorData<Expr>(2, 2);
  ginv.comps(0, 0) = parse_expr("1");
  ginv.comps(1, 1) = parse_expr("1/r^2");
  TensorValue ng = covariant_derivative(ginv, polar, vec({1.3, 0.9}));
  for (std::size_t i = 0; i < ng.comps.size(); ++i)
    CHECK(std::abs(ng.comps.flat(i)) < 1e-12);

  // The identity endomorphism is parallel on any chart (the two
  // Christoffel terms cancel), which exercises both variance signs.
  Chart ch = random_polynomial_chart(3, 777);
  ExprTensor delta;
  delta.variance = {Slot::Upper, Slot::Lower};
  delta.comps = TensorData<Expr>(3, 2);
  for (int i = 0; i < 3; ++i) delta.comps(i, i) = Expr::constant(1.0);
  TensorValue nd =
      covariant_derivative(delta, ch, sample_points(ch, 1, kDefaultSeed)[0]);
  for (std::size_t i = 0; i < nd.comps.size(); ++i)
    CHECK(std::abs(nd.comps.flat(i)) < 1e-12);
}

TEST_CASE("covariant derivative checks variance metadata") {
  Chart flat = flat_chart(2);
  ExprTensor bad;
  bad.variance = {Slot::Lower};   // rank says 2, variance says 1
  bad.comps = TensorData<Expr>(2, 2);
  CHECK_THROWS_AS(covariant_derivative(bad, flat, vec({0.0, 0.0})),
                  ChartError);
}

TEST_CASE("contracted second Bianchi identity on random charts") {
  for (int n : {3, 4}) {
    Chart ch = random_polynomial_chart(n, 900 + n);
    for (const auto& p : sample_points(ch, 10, kDefaultSeed)) {
      CurvatureJets cj = curvature_jets(ch, p, 3);
      // grad_a Ric_jl
      TensorData<double> nric(n, 3);
      for (int a = 0; a < n; ++a)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) {
            double acc = cj.dric(a, j, l);
            for (int m = 0; m < n; ++m)
              acc -= cj.gamma(m, a, j) * cj.ric(m, l) +
                     cj.gamma(m, a, l) * cj.ric(j, m);
            nric(a, j, l) = acc;
          }
      for (int j = 0; j < n; ++j) {
        double div = 0.0;
        for (int i = 0; i < n; ++i)
          for (int l = 0; l < n; ++l) div += cj.ginv(i, l) * nric(i, j, l);
        CHECK(std::abs(div - 0.5 * cj.dR[j]) < 1e-8);
      }
    }
  }
}

TEST_CASE("gradient, hessian, laplacian on model potentials") {
  // f = lambda |x|^2 / 2 on flat space: Hess f = lambda g, lap f = n lambda.
  const double lambda = 0.7;
  Chart flat = flat_chart(3);
  Expr f = Expr::constant(lambda / 2) *
           parse_expr("x1^2 + x2^2 + x3^2");
  Eigen::VectorXd p = vec({0.4, -0.8, 1.2});
  Eigen::MatrixXd h = hessian(f, flat, p);
  CHECK((h - lambda * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(laplacian(f, flat, p) == doctest::Approx(3 * lambda));
  CHECK(gradient(f, flat, p)[0] == doctest::Approx(lambda * 0.4));
  CHECK(grad_norm2(f, flat, p) ==
        doctest::Approx(lambda * lambda * p.squaredNorm()));

  // Constant f.
  Expr c = parse_expr("3");
  CHECK(gradient(c, flat, p).cwiseAbs().maxCoeff() == 0.0);
  CHECK(hessian(c, flat, p).cwiseAbs().maxCoeff() == 0.0);

  // f = x^2/2 on R x S^2: Hess f = diag(1, 0, 0).
  SolitonData cyl = build_rigid({3, 2, 0.5, FactorKind::Sphere});
  Eigen::VectorXd q = sample_points(cyl.chart, 1, 3)[0];
  Eigen::MatrixXd hc = hessian(cyl.f, cyl.chart, q);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 3);
  expect(0, 0) = 1.0;
  CHECK((hc - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("points outside the domain are detectable") {
  Chart ch = flat_chart(2);
  CHECK(ch.in_domain(vec({0.0, 0.0})));
  CHECK(!ch.in_domain(vec({3.0, 0.0})));
}

TEST_CASE("sampling is deterministic per seed") {
  Chart ch = flat_chart(3);
  auto a = sample_points(ch, 10, 123);
  auto b = sample_points(ch, 10, 123);
  auto c = sample_points(ch, 10, 124);
  for (int i = 0; i < 10; ++i) CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a[0] - c[0]).cwiseAbs().maxCoeff() > 0.0);
}
