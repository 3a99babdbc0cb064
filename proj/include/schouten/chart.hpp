#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "schouten/expr.hpp"

namespace schouten {

/// Coordinate chart: dimension, coordinate names, symmetric matrix of
/// metric component expressions (lower indices) and a closed sampling box
/// per coordinate.  Named parameters are bound alongside the coordinates
/// whenever a component is evaluated.
struct Chart {
  int n = 0;
  std::vector<std::string> coords;
  std::vector<std::vector<Expr>> g;                // n x n
  std::vector<std::pair<double, double>> domain;   // [lo, hi] per coordinate
  VarBinding params;

  /// Build from the upper triangle (i <= j); symmetry by mirroring.
  static Chart from_upper_triangle(std::vector<std::string> coords,
                                   std::vector<std::vector<Expr>> upper,
                                   std::vector<std::pair<double, double>> domain,
                                   VarBinding params = {});

  bool in_domain(const Eigen::VectorXd& p) const;

  /// Coordinate values at p plus the chart parameters.
  VarBinding binding_at(const Eigen::VectorXd& p) const;

  void validate() const;  // throws ChartError on structural problems
};

/// Deterministic uniform samples over the chart's domain box.  The
/// generator is fixed (not implementation-defined), so a given seed
/// produces identical points on every platform.
std::vector<Eigen::VectorXd> sample_points(const Chart& chart, int count,
                                           std::uint64_t seed);

constexpr std::uint64_t kDefaultSeed = 0x5EED;

}  // namespace schouten
