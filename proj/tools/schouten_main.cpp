// Batch front end: load a metric spec (file or builtin fixture), run the
// selected suites, write reports and CSV artifacts.  Exit codes: 0 all
// selected assertions pass, 1 assertion failure, 2 input error.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "schouten/classify.hpp"
#include "schouten/conformal.hpp"
#include "schouten/errors.hpp"
#include "schouten/ode.hpp"
#include "schouten/rigid.hpp"
#include "schouten/specfile.hpp"

namespace fs = std::filesystem;
using namespace schouten;

namespace {

struct CommonOpts {
  std::string input;    // metric-spec file path
  std::string fixture;  // builtin fixture name
  int samples = 50;
  std::uint64_t seed = kDefaultSeed;
  double step = 1e-3;
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input = true) {
  if (needs_input)
    cmd->add_option("input", o.input, "metric-spec file");
  cmd->add_option("--fixture", o.fixture,
                  "builtin fixture, e.g. gaussian:n=3,lambda=1");
  cmd->add_option("--samples", o.samples, "sample point count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "sampling seed");
  cmd->add_option("--step", o.step, "integration step h")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output directory");
}

struct LoadedInput {
  SolitonData sd;
  std::optional<RigidSpec> rigid;  // set when input is a builtin fixture
};

LoadedInput load_input(const CommonOpts& o) {
  LoadedInput in;
  if (!o.fixture.empty() && !o.input.empty())
    throw Error("give either an input file or --fixture, not both");
  if (!o.fixture.empty()) {
    RigidSpec spec;
    in.sd = parse_fixture(o.fixture, &spec);
    in.rigid = spec;
  } else if (!o.input.empty()) {
    in.sd = load_soliton_file(o.input);
  } else {
    throw Error("an input file or --fixture is required");
  }
  return in;
}

std::ofstream open_report(const CommonOpts& o, const char* name) {
  fs::create_directories(o.out);
  fs::path path = fs::path(o.out) / name;
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

void export_fixture(const CommonOpts& o, const LoadedInput& in) {
  if (!in.rigid) return;
  fs::create_directories(o.out);
  save_soliton_file((fs::path(o.out) / "fixture.spec").string(), in.sd);
}

void render_header(std::ostream& os, const LoadedInput& in,
                   const CommonOpts& o) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "input: %s\nn = %d, lambda = %.17g, samples = %d, seed = 0x%llx\n",
                in.sd.name.c_str(), in.sd.chart.n, in.sd.lambda, o.samples,
                static_cast<unsigned long long>(o.seed));
  os << buf;
}

void render_report(std::ostream& os, const ResidualReport& rep) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-15s %-68s %-12s %-12s %s\n", "identity",
                "statement", "residual", "tolerance", "verdict");
  os << buf;
  for (const auto& e : rep.entries) {
    if (!e.skipped.empty()) {
      std::snprintf(buf, sizeof(buf), "%-15s %-68s %-12s %-12s skipped: %s\n",
                    e.key.c_str(), e.description.c_str(), "-", "-",
                    e.skipped.c_str());
    } else if (e.informational) {
      std::snprintf(buf, sizeof(buf), "%-15s %-68s %-12.3e %-12s info\n",
                    e.key.c_str(), e.description.c_str(), e.residual, "-");
    } else {
      std::snprintf(buf, sizeof(buf), "%-15s %-68s %-12.3e %-12.3e %s\n",
                    e.key.c_str(), e.description.c_str(), e.residual,
                    e.tolerance, e.pass ? "pass" : "FAIL");
    }
    os << buf;
  }
}

int run_verify(const CommonOpts& o, std::ostream& os) {
  LoadedInput in = load_input(o);
  export_fixture(o, in);
  auto pts = sample_points(in.sd.chart, o.samples, o.seed);
  ResidualReport rep = verify_soliton(in.sd, pts);
  render_header(os, in, o);
  os << "\n";
  render_report(os, rep);
  return rep.all_pass() ? 0 : 1;
}

int run_classify(const CommonOpts& o, std::ostream& os) {
  LoadedInput in = load_input(o);
  export_fixture(o, in);
  auto pts = sample_points(in.sd.chart, o.samples, o.seed);
  ClassificationVerdict v = classify(in.sd, pts);
  render_header(os, in, o);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "\nverdict: %s\n"
                "evidence:\n"
                "  scalar curvature range   [%.9g, %.9g] (spread %.3e)\n"
                "  max soliton-eq residual  %.3e\n"
                "  max |grad f|             %.3e\n"
                "  max |two-eigen defect|   %.3e (over %d regular samples)\n",
                to_string(v.label), v.r_min, v.r_max, v.r_spread,
                v.max_eq1_residual, v.max_grad_norm, v.max_defect_abs,
                v.regular_count);
  os << buf;
  os << "  Ricci rank histogram     ";
  for (const auto& [rank, count] : v.ricci_rank_histogram)
    os << "rank " << rank << ": " << count << "  ";
  os << "\n";
  if (!v.failed_gate.empty()) os << "  failed gate: " << v.failed_gate << "\n";
  // A verdict on a verified soliton is a result, not a failed assertion;
  // only "not-a-soliton" is.
  return v.label == SolitonClass::NotASoliton ? 1 : 0;
}

int run_curvature(const CommonOpts& o, const std::string& at,
                  std::ostream& os) {
  LoadedInput in = load_input(o);
  const int n = in.sd.chart.n;
  Eigen::VectorXd p(n);
  {
    std::string cleaned = at;
    for (auto& c : cleaned)
      if (c == ',') c = ' ';
    std::istringstream ss(cleaned);
    for (int i = 0; i < n; ++i)
      if (!(ss >> p[i]))
        throw Error("--at needs " + std::to_string(n) + " coordinates");
    double extra;
    if (ss >> extra) throw Error("--at has too many coordinates");
  }
  CurvaturePackOptions opts;
  opts.with_nabla_ricci = true;
  CurvaturePack pk = curvature_pack(in.sd.chart, p, opts);
  render_header(os, in, o);
  char buf[128];
  os << "\npoint:";
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), " %.9g", p[i]);
    os << buf;
  }
  os << "\n\ng:\n" << pk.g << "\n\ng^{-1}:\n" << pk.g_inv << "\n";
  std::snprintf(buf, sizeof(buf), "\ndet g = %.12g\n", pk.det_g);
  os << buf;
  os << "\nnonzero Christoffel symbols (k; i j):\n";
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (std::abs(pk.christoffel(k, i, j)) > 1e-12) {
          std::snprintf(buf, sizeof(buf), "  Gamma^%d_%d%d = %.12g\n", k + 1,
                        i + 1, j + 1, pk.christoffel(k, i, j));
          os << buf;
        }
  os << "\nRic:\n" << pk.ricci << "\n";
  std::snprintf(buf, sizeof(buf), "\nR = %.12g\n|Ric|^2 = %.12g\n", pk.scalar,
                pk.ricci_norm2);
  os << buf;
  if (n >= 3) {
    ConformalPack cp = conformal_pack(in.sd.chart, p);
    double wmax = 0;
    for (std::size_t i = 0; i < cp.weyl.size(); ++i)
      wmax = std::max(wmax, std::abs(cp.weyl.flat(i)));
    double cmax = 0;
    for (std::size_t i = 0; i < cp.cotton.size(); ++i)
      cmax = std::max(cmax, std::abs(cp.cotton.flat(i)));
    std::snprintf(buf, sizeof(buf),
                  "max |Weyl| = %.6e\nmax |Cotton| = %.6e\nmax |Bach| = %.6e\n",
                  wmax, cmax, cp.bach.cwiseAbs().maxCoeff());
    os << buf;
  }
  return 0;
}

struct OdeOpts {
  double lambda = 1.0;
  double b0 = 1.0;
  double b0p = 3.0;
  double smax = 5.0;
  double drift_tol = 1e-6;
};

int run_ode(const CommonOpts& o, const OdeOpts& od, std::ostream& os) {
  OdeTrajectory traj =
      integrate_equality_ode(od.lambda, od.b0, od.b0p, 0.0, od.smax, o.step);
  fs::create_directories(o.out);
  {
    std::ofstream csv(fs::path(o.out) / "trajectory.csv");
    write_trajectory_csv(csv, traj);
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "equality ODE: b b'' - (b')^2 + 6 lambda b' - 8 lambda^2 = 0\n"
                "lambda = %.9g, b0 = %.9g, b0' = %.9g, h = %.3g, span = %.9g\n"
                "grid points: %zu\n",
                od.lambda, od.b0, od.b0p, o.step, od.smax, traj.s.size());
  os << buf;
  if (traj.truncation) os << "truncated: " << *traj.truncation << "\n";

  bool ok = true;
  if (std::abs(od.b0p - 2.0 * od.lambda) >= 1e-6) {
    try {
      FirstIntegral fi = first_integral(traj);
      std::snprintf(buf, sizeof(buf),
                    "first integral sigma0 = %.12g, max drift = %.3e (tol %.1e) %s\n",
                    fi.sigma0, fi.max_drift, od.drift_tol,
                    fi.max_drift <= od.drift_tol ? "pass" : "FAIL");
      os << buf;
      ok = ok && fi.max_drift <= od.drift_tol;
    } catch (const PreconditionError& e) {
      os << "first integral: " << e.what() << "\n";
    }
  } else {
    os << "first integral: skipped (b' = 2 lambda branch)\n";
  }
  RewritingResiduals rw = rewriting_checks(traj, od.lambda);
  std::snprintf(buf, sizeof(buf),
                "rewriting residuals: u %.3e, v %.3e (tol %.3e) %s\n",
                rw.u_residual, rw.v_residual, rw.tolerance,
                rw.pass ? "pass" : "FAIL");
  os << buf;
  ok = ok && rw.pass;
  return ok ? 0 : 1;
}

struct TraceOpts {
  std::string start;  // comma/space separated; empty = auto
  double slen = 0.5;
};

Eigen::VectorXd pick_regular_start(const SolitonData& sd) {
  const Chart& ch = sd.chart;
  // Walk a few box fractions until |grad f| is comfortably nonzero.
  for (double frac : {0.6, 0.75, 0.4, 0.9, 0.25}) {
    Eigen::VectorXd p(ch.n);
    for (int i = 0; i < ch.n; ++i) {
      auto [lo, hi] = ch.domain[i];
      p[i] = lo + frac * (hi - lo);
    }
    if (std::sqrt(grad_norm2(sd.f, ch, p)) > 1e-4) return p;
  }
  throw PreconditionError("no regular start point found; give --start explicitly");
}

int run_trace(const CommonOpts& o, const TraceOpts& to, std::ostream& os) {
  LoadedInput in = load_input(o);
  export_fixture(o, in);
  const int n = in.sd.chart.n;

  Eigen::VectorXd start;
  if (to.start.empty()) {
    start = pick_regular_start(in.sd);
  } else {
    start.resize(n);
    std::string cleaned = to.start;
    for (auto& c : cleaned)
      if (c == ',') c = ' ';
    std::istringstream ss(cleaned);
    for (int i = 0; i < n; ++i)
      if (!(ss >> start[i]))
        throw Error("--start needs " + std::to_string(n) + " coordinates");
  }

  CurveTrace tr = trace_integral_curve(in.sd, start, to.slen, o.step);
  fs::create_directories(o.out);
  {
    std::ofstream csv(fs::path(o.out) / "trace.csv");
    write_trace_csv(csv, tr);
  }
  render_header(os, in, o);
  char buf[256];
  os << "\nintegral curve of grad f / |grad f|^2\nstart:";
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), " %.9g", start[i]);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf), "\ngrid points: %zu\n", tr.s.size());
  os << buf;
  if (tr.truncation) os << "truncated: " << *tr.truncation << "\n";

  TraceChecks ck = inequality_check(tr, in.sd.lambda, n);
  bool ok = true;
  auto line = [&](const char* what, double value, double tol, bool pass) {
    std::snprintf(buf, sizeof(buf), "%-44s %.3e (tol %.1e) %s\n", what, value,
                  tol, pass ? "pass" : "FAIL");
    os << buf;
    ok = ok && pass;
  };
  line("(f o alpha)' = 1 deviation", ck.linearity_residual, 1e-5,
       ck.linearity_residual <= 1e-5);
  line("ODE inequality min slack (>= -tol)", ck.ode_min_slack, 1e-4,
       ck.ode_min_slack >= -1e-4);
  line("b' vs R/(n-1) + 2 lambda deviation", ck.bprime_vs_curvature, 1e-4,
       ck.bprime_vs_curvature <= 1e-4);
  line("(b'-2l)(b'-4l) max (<= tol)", ck.product_max, 1e-4,
       ck.product_max <= 1e-4);
  std::snprintf(buf, sizeof(buf), "%-44s %.9g\n", "measured slope of b",
                ck.slope);
  os << buf;
  if (in.rigid && in.rigid->k <= in.rigid->n - 1) {
    SlopeInfo si = expected_slope(*in.rigid);
    line("slope vs 4(n-1)lambda/(2(n-1)-k)",
         std::abs(ck.slope - si.slope), 1e-4,
         std::abs(ck.slope - si.slope) <= 1e-4);
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "curvature, conformal-tensor and gradient-Schouten-soliton checks "
      "for metrics given as coordinate expressions"};
  app.require_subcommand(1);

  CommonOpts vo, co, ko, oo, to_, ao;
  std::string at;
  OdeOpts od;
  TraceOpts tr;

  CLI::App* verify = app.add_subcommand(
      "verify", "soliton equation, identities, bounds and Bach checks");
  add_common(verify, vo);

  CLI::App* curvature =
      app.add_subcommand("curvature", "curvature tensors at a point");
  add_common(curvature, ko);
  curvature->add_option("--at", at, "point coordinates, comma separated")
      ->required();

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "rigidity classification from samples");
  add_common(classify_cmd, co);

  CLI::App* ode = app.add_subcommand(
      "ode", "integrate the structural ODE and check its first integral");
  add_common(ode, oo, /*needs_input=*/false);
  ode->add_option("--lambda", od.lambda, "soliton constant");
  ode->add_option("--b0", od.b0, "initial b")->check(CLI::PositiveNumber);
  ode->add_option("--b0p", od.b0p, "initial b'");
  ode->add_option("--smax", od.smax, "s-span")->check(CLI::PositiveNumber);
  ode->add_option("--drift-tol", od.drift_tol, "first-integral drift tolerance");

  CLI::App* trace = app.add_subcommand(
      "trace", "trace an integral curve of grad f/|grad f|^2");
  add_common(trace, to_);
  trace->add_option("--start", tr.start, "start point, comma separated");
  trace->add_option("--slen", tr.slen, "s-span of the trace")
      ->check(CLI::PositiveNumber);

  CLI::App* all = app.add_subcommand("all", "verify + classify + trace");
  add_common(all, ao);
  all->add_option("--slen", tr.slen, "s-span of the trace")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::ostringstream text;
    int rc = 0;
    const CommonOpts* copts = nullptr;
    if (verify->parsed()) {
      copts = &vo;
      rc = run_verify(vo, text);
    } else if (curvature->parsed()) {
      copts = &ko;
      rc = run_curvature(ko, at, text);
    } else if (classify_cmd->parsed()) {
      copts = &co;
      rc = run_classify(co, text);
    } else if (ode->parsed()) {
      copts = &oo;
      rc = run_ode(oo, od, text);
    } else if (trace->parsed()) {
      copts = &to_;
      rc = run_trace(to_, tr, text);
    } else if (all->parsed()) {
      copts = &ao;
      int r1 = run_verify(ao, text);
      text << "\n";
      int r2 = run_classify(ao, text);
      text << "\n";
      int r3 = 0;
      try {
        r3 = run_trace(ao, tr, text);
      } catch (const PreconditionError& e) {
        // Constant potentials have no integral curves to trace.
        text << "trace skipped: " << e.what() << "\n";
      }
      rc = std::max({r1, r2, r3});
    }
    if (copts != nullptr) {
      auto os = open_report(*copts, "report.txt");
      os << text.str();
      std::cout << text.str();
    }
    return rc;
  } catch (const ConventionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
