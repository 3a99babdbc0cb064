#pragma once

#include <string>

#include "schouten/soliton.hpp"

namespace schouten {

enum class FactorKind { Sphere, Hyperbolic, None };

/// Parameters of the rigid product family: flat R^{n-k} times an
/// Einstein factor N^k of scalar curvature R_N = 2(n-1)k lambda/(2(n-1)-k),
/// with potential f = 1/2 (R_N/(2(n-1)) + lambda) |x|^2 on the flat part.
/// k = 0 is the Gaussian soliton, k = n the Einstein case (f constant).
struct RigidSpec {
  int n = 3;
  int k = 0;
  double lambda = 1.0;
  FactorKind factor = FactorKind::None;
};

/// Scalar curvature of the Einstein factor (equals the scalar curvature
/// of the whole product).
double rigid_scalar_curvature(const RigidSpec& spec);

/// Single-chart soliton for the spec: flat coordinates on R^{n-k} plus a
/// colatitude-style chart on the sphere factor or an upper-half-space
/// chart on the hyperbolic factor.  The result satisfies the soliton
/// equation exactly on its domain box.
SolitonData build_rigid(const RigidSpec& spec);

struct SlopeInfo {
  double slope;    // b' = 4(n-1) lambda / (2(n-1) - k)
  double product;  // (b'-2 lambda)(b'-4 lambda)
};

/// Expected slope of b(s) = |grad f|^2 along integral curves of
/// grad f/|grad f|^2, and the product (b'-2l)(b'-4l) =
/// -8k(n-1-k) lambda^2/(2(n-1)-k)^2.  Requires k <= n-1, lambda != 0.
SlopeInfo expected_slope(const RigidSpec& spec);

/// Round k-sphere of the given radius in nested colatitude coordinates,
/// poles excluded (angles in [0.2, pi - 0.2]).  k >= 2.
Chart sphere_chart(int k, double radius);

/// Hyperbolic k-space of curvature -1/scale^2 in upper-half-space
/// coordinates, bounded box with the last coordinate in [0.5, 1.5].
Chart hyperbolic_chart(int k, double scale);

/// Flat R^n, coordinates x1..xn, box [-2, 2]^n.
Chart flat_chart(int n);

/// Builtin fixture names for the CLI:
///   gaussian:n=3,lambda=1
///   cylinder:n=3,k=2,lambda=0.5      (k defaults to n-1)
///   einstein:n=3,lambda=1            (k = n)
///   rigid:n=5,k=2,lambda=1[,factor=sphere|hyperbolic]
/// When `spec_out` is given, the parsed parameters are stored there.
SolitonData parse_fixture(const std::string& name,
                          RigidSpec* spec_out = nullptr);

}  // namespace schouten
