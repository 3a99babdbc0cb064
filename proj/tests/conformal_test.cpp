#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "schouten/conformal.hpp"
#include "schouten/geometry.hpp"
#include "schouten/rigid.hpp"
#include "support.hpp"

using namespace schouten;
using schouten::testing::random_polynomial_chart;

namespace {

double max_abs(const TensorData<double>& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    m = std::max(m, std::abs(t.flat(i)));
  return m;
}

}  // namespace

TEST_CASE("Weyl vanishes identically in dimension 3") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Chart ch = random_polynomial_chart(3, seed);
    for (const auto& p : sample_points(ch, 10, kDefaultSeed))
      CHECK(max_abs(weyl(ch, p)) < 1e-8);
  }
}

TEST_CASE("Weyl vanishes on flat space and on the round 4-sphere") {
  Chart flat = flat_chart(4);
  CHECK(max_abs(weyl(flat, sample_points(flat, 1, 1)[0])) == 0.0);

  Chart s4 = sphere_chart(4, 1.0);
  for (const auto& p : sample_points(s4, 5, kDefaultSeed))
    CHECK(max_abs(weyl(s4, p)) < 1e-10);
}

TEST_CASE("Weyl is totally trace-free on random 4- and 5-charts") {
  for (int n : {4, 5}) {
    Chart ch = random_polynomial_chart(n, 40 + n);
    for (const auto& p : sample_points(ch, 5, kDefaultSeed)) {
      MetricValues mv = metric_at(ch, p);
      TensorData<double> W = weyl(ch, p);
      double scale = 1.0 + max_abs(W);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double tr = 0.0;
          for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) tr += mv.g_inv(i, k) * W(i, j, k, l);
          CHECK(std::abs(tr) < 1e-8 * scale);
        }
    }
  }
}

TEST_CASE("Weyl requires dimension >= 3") {
  Chart ch = flat_chart(2);
  CHECK_THROWS_AS(weyl(ch, sample_points(ch, 1, 1)[0]), ChartError);
}

TEST_CASE("Cotton tensor: flat, cylinder, antisymmetry, trace") {
  Chart flat = flat_chart(3);
  CHECK(max_abs(cotton(flat, sample_points(flat, 1, 1)[0])) == 0.0);

  // R x S^2 is locally conformally flat, so its Cotton tensor vanishes.
  SolitonData cyl = build_rigid({3, 2, 0.5, FactorKind::Sphere});
  for (const auto& p : sample_points(cyl.chart, 10, kDefaultSeed))
    CHECK(max_abs(cotton(cyl.chart, p)) < 1e-8);

  Chart ch = random_polynomial_chart(3, 77);
  for (const auto& p : sample_points(ch, 10, kDefaultSeed)) {
    TensorData<double> C = cotton(ch, p);
    MetricValues mv = metric_at(ch, p);
    double scale = 1.0 + max_abs(C);
    CHECK(max_abs(C) > 1e-4);  // nontrivial chart actually exercises it
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          CHECK(std::abs(C(i, j, k) + C(j, i, k)) < 1e-8 * scale);
      double tr = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) tr += mv.g_inv(j, k) * C(i, j, k);
      CHECK(std::abs(tr) < 1e-8 * scale);
    }
  }
}

TEST_CASE("Bach vanishes on flat charts and on the Einstein 4-sphere") {
  Chart flat = flat_chart(4);
  CHECK(bach(flat, sample_points(flat, 1, 1)[0]).cwiseAbs().maxCoeff() == 0.0);

  Chart s4 = sphere_chart(4, 1.0);
  for (const auto& p : sample_points(s4, 5, kDefaultSeed))
    CHECK(bach(s4, p).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("Bach routes agree within 1e-6 relative on random 4/5-charts") {
  for (int n : {4, 5}) {
    for (std::uint64_t seed : {11u, 22u, 33u}) {
      Chart ch = random_polynomial_chart(n, seed * 10 + n);
      for (const auto& p : sample_points(ch, 3, kDefaultSeed)) {
        Eigen::MatrixXd b18 = bach_via_weyl(ch, p);
        Eigen::MatrixXd b19 = bach_via_cotton(ch, p);
        double scale =
            std::max({1e-6, b18.cwiseAbs().maxCoeff(), b19.cwiseAbs().maxCoeff()});
        CHECK((b18 - b19).cwiseAbs().maxCoeff() / scale < 1e-6);
        CHECK_NOTHROW(bach(ch, p));  // built-in audit concurs
      }
    }
  }
}

TEST_CASE("Bach is symmetric and trace-free on random 4-charts") {
  Chart ch = random_polynomial_chart(4, 99);
  for (const auto& p : sample_points(ch, 5, kDefaultSeed)) {
    Eigen::MatrixXd B = bach(ch, p);
    MetricValues mv = metric_at(ch, p);
    CHECK(B.cwiseAbs().maxCoeff() > 1e-4);
    CHECK((B - B.transpose()).cwiseAbs().maxCoeff() < 1e-7);
    CHECK(std::abs((mv.g_inv * B).trace()) < 1e-7);
  }
}

TEST_CASE("divergence of Bach: identity route vs direct covariant divergence") {
  Chart flat = flat_chart(3);
  CHECK(div_bach(flat, sample_points(flat, 1, 1)[0]).cwiseAbs().maxCoeff() ==
        0.0);

  // Both routes vanish on the cylinder soliton chart.
  SolitonData cyl = build_rigid({3, 2, 0.5, FactorKind::Sphere});
  for (const auto& p : sample_points(cyl.chart, 5, kDefaultSeed)) {
    CHECK(div_bach(cyl.chart, p).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(div_bach_direct(cyl.chart, p).cwiseAbs().maxCoeff() < 1e-7);
  }

  // Randomized 3-metrics: -Ric.C equals the direct divergence of B.
  for (std::uint64_t seed : {5u, 6u}) {
    Chart ch = random_polynomial_chart(3, seed);
    for (const auto& p : sample_points(ch, 3, kDefaultSeed)) {
      Eigen::VectorXd a = div_bach(ch, p);
      Eigen::VectorXd b = div_bach_direct(ch, p);
      double scale = std::max(1e-6, a.cwiseAbs().maxCoeff());
      CHECK((a - b).cwiseAbs().maxCoeff() / scale < 1e-6);
    }
  }
}

TEST_CASE("div_bach rejects other dimensions") {
  Chart ch = flat_chart(4);
  CHECK_THROWS_AS(div_bach(ch, sample_points(ch, 1, 1)[0]), ChartError);
}

TEST_CASE("conformal pack bundles the tensors and their invariants") {
  Chart ch = random_polynomial_chart(3, 123);
  Eigen::VectorXd p = sample_points(ch, 1, kDefaultSeed)[0];
  ConformalPack pk = conformal_pack(ch, p);
  CHECK(max_abs(pk.weyl) < 1e-8);
  CHECK(pk.div_bach.has_value());

  Chart ch4 = random_polynomial_chart(4, 321);
  Eigen::VectorXd q = sample_points(ch4, 1, kDefaultSeed)[0];
  ConformalPack pk4 = conformal_pack(ch4, q);
  CHECK(!pk4.div_bach.has_value());
  CHECK(max_abs(pk4.weyl) > 1e-4);
}
