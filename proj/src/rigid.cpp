#include "schouten/rigid.hpp"

#include <cmath>
#include <sstream>

#include "schouten/errors.hpp"

namespace schouten {

namespace {

const double kPi = 3.14159265358979323846;

std::string coord(const std::string& base, int i) {
  return base + std::to_string(i);
}

void check_spec(const RigidSpec& s) {
  if (s.n < 3) throw PreconditionError("rigid family needs dimension >= 3");
  if (s.k < 0 || s.k > s.n)
    throw PreconditionError("factor dimension k must satisfy 0 <= k <= n");
  if (s.lambda == 0.0)
    throw PreconditionError("rigid family is parametrized by lambda != 0");
}

}  // namespace

double rigid_scalar_curvature(const RigidSpec& s) {
  check_spec(s);
  return 2.0 * (s.n - 1) * s.k * s.lambda / (2.0 * (s.n - 1) - s.k);
}

Chart flat_chart(int n) {
  std::vector<std::string> names;
  std::vector<std::vector<Expr>> up(n, std::vector<Expr>(n, Expr::constant(0)));
  for (int i = 0; i < n; ++i) {
    names.push_back(coord("x", i + 1));
    up[i][i] = Expr::constant(1.0);
  }
  return Chart::from_upper_triangle(
      names, up, std::vector<std::pair<double, double>>(n, {-2.0, 2.0}));
}

Chart sphere_chart(int k, double radius) {
  if (k < 2) throw PreconditionError("sphere chart needs k >= 2");
  if (!(radius > 0.0)) throw PreconditionError("sphere radius must be positive");
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i) names.push_back(coord("th", i + 1));
  std::vector<std::vector<Expr>> up(k, std::vector<Expr>(k, Expr::constant(0)));
  Expr r2 = Expr::constant(radius * radius);
  Expr acc = r2;
  for (int i = 0; i < k; ++i) {
    up[i][i] = acc;
    acc = acc * pow(sin(Expr::variable(names[i])), 2.0);
  }
  return Chart::from_upper_triangle(
      names, up,
      std::vector<std::pair<double, double>>(k, {0.2, kPi - 0.2}));
}

Chart hyperbolic_chart(int k, double scale) {
  if (k < 2) throw PreconditionError("hyperbolic chart needs k >= 2");
  if (!(scale > 0.0)) throw PreconditionError("hyperbolic scale must be positive");
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i) names.push_back(coord("y", i + 1));
  std::vector<std::vector<Expr>> up(k, std::vector<Expr>(k, Expr::constant(0)));
  Expr conf = Expr::constant(scale * scale) /
              pow(Expr::variable(names[k - 1]), 2.0);
  for (int i = 0; i < k; ++i) up[i][i] = conf;
  std::vector<std::pair<double, double>> dom(k, {-1.0, 1.0});
  dom[k - 1] = {0.5, 1.5};
  return Chart::from_upper_triangle(names, up, dom);
}

SolitonData build_rigid(const RigidSpec& s) {
  check_spec(s);
  const int flat_dim = s.n - s.k;
  const double rn = rigid_scalar_curvature(s);

  FactorKind kind = s.factor;
  if (s.k == 0) {
    kind = FactorKind::None;
  } else {
    if (s.k == 1)
      throw PreconditionError(
          "k = 1 is not constructible: a 1-dimensional factor has zero "
          "scalar curvature but the family requires R_N != 0");
    if (kind == FactorKind::None)
      kind = rn > 0.0 ? FactorKind::Sphere : FactorKind::Hyperbolic;
    if (kind == FactorKind::Sphere && !(rn > 0.0))
      throw PreconditionError(
          "sphere factor requires R_N > 0 (lambda * k > 0)");
    if (kind == FactorKind::Hyperbolic && !(rn < 0.0))
      throw PreconditionError("hyperbolic factor requires R_N < 0");
  }

  // Assemble the product chart.
  std::vector<std::string> names;
  std::vector<std::vector<Expr>> up;
  std::vector<std::pair<double, double>> dom;

  for (int i = 0; i < flat_dim; ++i) {
    names.push_back(coord("x", i + 1));
    dom.emplace_back(-2.0, 2.0);
  }
  Chart factor;
  if (s.k >= 2) {
    double curv = rn / (s.k * (s.k - 1));  // sectional curvature of N^k
    factor = kind == FactorKind::Sphere
                 ? sphere_chart(s.k, 1.0 / std::sqrt(curv))
                 : hyperbolic_chart(s.k, 1.0 / std::sqrt(-curv));
    for (int i = 0; i < s.k; ++i) {
      names.push_back(factor.coords[i]);
      dom.push_back(factor.domain[i]);
    }
  }

  const int n = s.n;
  up.assign(n, std::vector<Expr>(n, Expr::constant(0)));
  for (int i = 0; i < flat_dim; ++i) up[i][i] = Expr::constant(1.0);
  for (int i = 0; i < s.k; ++i)
    for (int j = i; j < s.k; ++j)
      up[flat_dim + i][flat_dim + j] = factor.g[i][j];

  SolitonData sd;
  sd.chart = Chart::from_upper_triangle(names, up, dom);
  sd.lambda = s.lambda;

  const double c = 0.5 * (rn / (2.0 * (n - 1)) + s.lambda);
  Expr f = Expr::constant(0.0);
  for (int i = 0; i < flat_dim; ++i)
    f = f + pow(Expr::variable(coord("x", i + 1)), 2.0);
  sd.f = Expr::constant(c) * f;
  sd.f0 = 0.0;
  if (s.k == s.n) {
    sd.f = Expr::constant(0.0);
    sd.f0 = 0.0;
    sd.einstein_case = true;
  }

  std::ostringstream name;
  if (s.k == 0)
    name << "gaussian";
  else if (s.k == s.n)
    name << "einstein";
  else
    name << "rigid" << (kind == FactorKind::Sphere ? "-sphere" : "-hyperbolic");
  name << ":n=" << s.n << ",k=" << s.k << ",lambda=" << s.lambda;
  sd.name = name.str();
  return sd;
}

SlopeInfo expected_slope(const RigidSpec& s) {
  check_spec(s);
  if (s.k > s.n - 1)
    throw PreconditionError("expected_slope needs a nonconstant f (k <= n-1)");
  const double den = 2.0 * (s.n - 1) - s.k;
  SlopeInfo out;
  out.slope = 4.0 * (s.n - 1) * s.lambda / den;
  out.product = -8.0 * s.k * (s.n - 1 - s.k) * s.lambda * s.lambda / (den * den);
  return out;
}

SolitonData parse_fixture(const std::string& name, RigidSpec* spec_out) {
  auto colon = name.find(':');
  std::string kind = name.substr(0, colon);
  RigidSpec spec;
  bool have_n = false, have_k = false;

  if (colon != std::string::npos) {
    std::string args = name.substr(colon + 1);
    std::istringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw Error("bad fixture argument `" + item + "` (expected key=value)");
      std::string key = item.substr(0, eq);
      std::string val = item.substr(eq + 1);
      try {
        if (key == "n") {
          spec.n = std::stoi(val);
          have_n = true;
        } else if (key == "k") {
          spec.k = std::stoi(val);
          have_k = true;
        } else if (key == "lambda") {
          spec.lambda = std::stod(val);
        } else if (key == "factor") {
          if (val == "sphere")
            spec.factor = FactorKind::Sphere;
          else if (val == "hyperbolic")
            spec.factor = FactorKind::Hyperbolic;
          else
            throw Error("unknown factor kind `" + val + "`");
        } else {
          throw Error("unknown fixture argument `" + key + "`");
        }
      } catch (const std::invalid_argument&) {
        throw Error("bad value for fixture argument `" + key + "`");
      }
    }
  }
  if (!have_n) throw Error("fixture needs n=<dim>");

  if (kind == "gaussian") {
    spec.k = 0;
  } else if (kind == "cylinder") {
    if (!have_k) spec.k = spec.n - 1;
  } else if (kind == "einstein") {
    spec.k = spec.n;
  } else if (kind == "rigid") {
    if (!have_k) throw Error("rigid fixture needs k=<factor dim>");
  } else {
    throw Error("unknown fixture kind `" + kind +
                "` (gaussian, cylinder, einstein, rigid)");
  }
  if (spec_out != nullptr) *spec_out = spec;
  return build_rigid(spec);
}

}  // namespace schouten
