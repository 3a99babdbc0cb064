#pragma once

#include <random>
#include <string>
#include <vector>

#include "schouten/chart.hpp"

namespace schouten::testing {

/// Near-identity chart with quadratic-polynomial perturbations, metric
/// coefficients drawn uniformly from [-0.2, 0.2].  The domain box shrinks
/// with dimension so the metric stays positive definite everywhere
/// (Gershgorin: the perturbation row sums stay below 1).
inline Chart random_polynomial_chart(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto coeff = [&] {
    return (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 0.4 - 0.2;
  };
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  std::vector<std::vector<Expr>> up(n, std::vector<Expr>(n, Expr::constant(0)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Expr e = Expr::constant(i == j ? 1.0 : 0.0);
      for (int a = 0; a < n; ++a)
        e = e + Expr::constant(coeff()) * Expr::variable(names[a]);
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
          e = e + Expr::constant(coeff()) * Expr::variable(names[a]) *
                      Expr::variable(names[b]);
      up[i][j] = e;
    }
  const double half = 0.5 / n;
  return Chart::from_upper_triangle(
      names, up, std::vector<std::pair<double, double>>(n, {-half, half}));
}

}  // namespace schouten::testing
