#include "schouten/chart.hpp"

#include <random>

#include "schouten/errors.hpp"

namespace schouten {

Chart Chart::from_upper_triangle(std::vector<std::string> coords,
                                 std::vector<std::vector<Expr>> upper,
                                 std::vector<std::pair<double, double>> domain,
                                 VarBinding params) {
  Chart c;
  c.n = static_cast<int>(coords.size());
  c.coords = std::move(coords);
  c.domain = std::move(domain);
  c.params = std::move(params);
  c.g.assign(c.n, std::vector<Expr>(c.n, Expr::constant(0.0)));
  for (int i = 0; i < c.n; ++i)
    for (int j = i; j < c.n; ++j) {
      c.g[i][j] = upper[i][j];
      c.g[j][i] = upper[i][j];
    }
  c.validate();
  return c;
}

bool Chart::in_domain(const Eigen::VectorXd& p) const {
  if (p.size() != n) return false;
  for (int i = 0; i < n; ++i)
    if (p[i] < domain[i].first || p[i] > domain[i].second) return false;
  return true;
}

VarBinding Chart::binding_at(const Eigen::VectorXd& p) const {
  VarBinding b;
  for (int i = 0; i < n; ++i) b.set(coords[i], p[i]);
  for (const auto& [name, value] : params.items()) b.set(name, value);
  return b;
}

void Chart::validate() const {
  if (n < 2) throw ChartError("chart dimension must be at least 2");
  if (static_cast<int>(coords.size()) != n)
    throw ChartError("coordinate name count does not match dimension");
  if (static_cast<int>(g.size()) != n)
    throw ChartError("metric expression matrix is not n x n");
  for (const auto& row : g)
    if (static_cast<int>(row.size()) != n)
      throw ChartError("metric expression matrix is not n x n");
  if (static_cast<int>(domain.size()) != n)
    throw ChartError("domain box does not match dimension");
  for (int i = 0; i < n; ++i)
    if (!(domain[i].first < domain[i].second))
      throw ChartError("degenerate domain interval for coordinate `" +
                       coords[i] + "`");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (coords[i] == coords[j] && i != j)
        throw ChartError("duplicate coordinate name `" + coords[i] + "`");
}

std::vector<Eigen::VectorXd> sample_points(const Chart& chart, int count,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Map raw 64-bit draws into [0,1) explicitly; uniform_real_distribution
  // is implementation-defined and would break cross-platform determinism.
  auto unit = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(count);
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd p(chart.n);
    for (int i = 0; i < chart.n; ++i) {
      auto [lo, hi] = chart.domain[i];
      p[i] = lo + (hi - lo) * unit();
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace schouten
