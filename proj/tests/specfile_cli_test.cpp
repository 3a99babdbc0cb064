#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "schouten/rigid.hpp"
#include "schouten/specfile.hpp"

using namespace schouten;
namespace fs = std::filesystem;

namespace {

const char* kCylinderSpec = R"(# R x S^2 cylinder, lambda = 1/2
[chart]
dim = 3
coords = x th ph
g[1][1] = 1
g[2][2] = 1
g[3][3] = sin(th)^2
domain[1] = -1 1
domain[2] = 0.2 2.94
domain[3] = 0.2 2.94

[potential]
f = x^2/2
lambda = 0.5
f0 = 0
)";

SolitonData load_str(const std::string& text) {
  std::istringstream is(text);
  return load_soliton(is, "inline");
}

fs::path temp_dir() {
  fs::path d = fs::temp_directory_path() / "schouten_cli_test";
  fs::create_directories(d);
  return d;
}

#ifdef SCHOUTEN_CLI_BIN
int run_cli(const std::string& args) {
  std::string cmd = std::string(SCHOUTEN_CLI_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}
#endif

}  // namespace

TEST_CASE("metric-spec files load into working soliton data") {
  SolitonData sd = load_str(kCylinderSpec);
  CHECK(sd.chart.n == 3);
  CHECK(sd.chart.coords[1] == "th");
  CHECK(sd.lambda == 0.5);
  CHECK(sd.f0 == 0.0);
  auto pts = sample_points(sd.chart, 20, kDefaultSeed);
  CHECK(verify_soliton(sd, pts).all_pass());
}

TEST_CASE("save/load round trip preserves the fixture") {
  SolitonData sd = build_rigid({4, 3, 1.0, FactorKind::Sphere});
  std::ostringstream os;
  save_soliton(os, sd);
  SolitonData back = load_str(os.str());
  CHECK(back.chart.n == 4);
  CHECK(back.lambda == 1.0);
  CHECK(back.chart.coords == sd.chart.coords);
  auto pts = sample_points(back.chart, 20, kDefaultSeed);
  CHECK(verify_soliton(back, pts).all_pass());
}

TEST_CASE("params section binds named constants in expressions") {
  const char* text = R"(
[chart]
dim = 2
coords = u v
g[1][1] = a
g[2][2] = a*u^2
domain[1] = 0.5 2
domain[2] = 0.2 3

[potential]
f = 0
lambda = 1

[params]
a = 2.0
)";
  SolitonData sd = load_str(text);
  MetricValues mv = metric_at(sd.chart, (Eigen::VectorXd(2) << 1.0, 1.0).finished());
  CHECK(mv.g(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("spec file errors carry line numbers") {
  auto expect_error = [](const std::string& text, const char* needle) {
    try {
      load_str(text);
      FAIL_CHECK("expected SpecFileError for: " << needle);
    } catch (const SpecFileError& e) {
      INFO(e.what());
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
      CHECK(e.line() >= 1);
    }
  };
  expect_error("[chart]\ncoords = x y\n", "dim");
  expect_error("[chart]\ndim = 2\ncoords = x y\ng[1][3] = 1\n",
               "dimension mismatch");
  expect_error("[chart]\ndim = 2\ncoords = x y z\n", "dimension mismatch");
  expect_error("[chart]\ndim = 2\ncoords = x y\ng[2][1] = 1\n",
               "upper triangle");
  expect_error("[chart]\ndim = 2\ncoords = x y\ng[1][1] = 1+\n",
               "bad expression");
  expect_error("dim = 2\n", "outside of any section");
  expect_error(
      "[chart]\ndim = 2\ncoords = x y\ng[1][1] = 1\ng[2][2] = 1\n"
      "domain[1] = 0 1\ndomain[2] = 0 1\n[potential]\nlambda = 1\n",
      "missing required key `f`");
}

#ifdef SCHOUTEN_CLI_BIN

TEST_CASE("CLI verify: exit 0 on a fixture, 1 on a perturbed spec, 2 on junk") {
  fs::path dir = temp_dir();
  CHECK(run_cli("verify --fixture gaussian:n=3,lambda=1 --out " +
                (dir / "v1").string()) == 0);
  CHECK(fs::exists(dir / "v1" / "report.txt"));
  CHECK(fs::exists(dir / "v1" / "fixture.spec"));

  // Exported fixture spec round-trips through the file interface.
  CHECK(run_cli("verify " + (dir / "v1" / "fixture.spec").string() + " --out " +
                (dir / "v1b").string()) == 0);

  // 1%-perturbed potential: assertion failure.
  std::string bad = kCylinderSpec;
  auto pos = bad.find("f = x^2/2");
  bad.replace(pos, 9, "f = 0.505*x^2");
  std::ofstream(dir / "bad.spec") << bad;
  CHECK(run_cli("verify " + (dir / "bad.spec").string() + " --out " +
                (dir / "v2").string()) == 1);

  CHECK(run_cli("verify /nonexistent.spec --out " + (dir / "v3").string()) == 2);
  CHECK(run_cli("verify --fixture bogus:n=3 --out " + (dir / "v4").string()) ==
        2);
  CHECK(run_cli("verify --out " + (dir / "v5").string()) == 2);
}

TEST_CASE("CLI classify, ode, trace, curvature, all") {
  fs::path dir = temp_dir();
  CHECK(run_cli("classify --fixture cylinder:n=3,lambda=0.5 --out " +
                (dir / "c1").string()) == 0);
  CHECK(run_cli("ode --lambda 1 --b0 1 --b0p 3 --smax 5 --out " +
                (dir / "o1").string()) == 0);
  CHECK(fs::exists(dir / "o1" / "trajectory.csv"));
  CHECK(run_cli("trace --fixture gaussian:n=3,lambda=1 --slen 0.3 --out " +
                (dir / "t1").string()) == 0);
  CHECK(fs::exists(dir / "t1" / "trace.csv"));
  CHECK(run_cli("curvature --fixture cylinder:n=3,lambda=0.5 --at 0.1,1.0,1.3 "
                "--out " +
                (dir / "k1").string()) == 0);
  CHECK(run_cli("all --fixture cylinder:n=4,k=3,lambda=1 --samples 25 --out " +
                (dir / "a1").string()) == 0);
}

TEST_CASE("CLI reports are byte-identical across repeated runs") {
  fs::path dir = temp_dir();
  REQUIRE(run_cli("verify --fixture cylinder:n=3,lambda=0.5 --samples 20 --out " +
                  (dir / "r1").string()) == 0);
  REQUIRE(run_cli("verify --fixture cylinder:n=3,lambda=0.5 --samples 20 --out " +
                  (dir / "r2").string()) == 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  CHECK(slurp(dir / "r1" / "report.txt") == slurp(dir / "r2" / "report.txt"));
  CHECK(!slurp(dir / "r1" / "report.txt").empty());
}

#endif  // SCHOUTEN_CLI_BIN
