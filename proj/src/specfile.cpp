#include "schouten/specfile.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "schouten/errors.hpp"

namespace schouten {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& s, int line, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (trim(s.substr(used)).empty()) return v;
  } catch (...) {
  }
  throw SpecFileError(std::string("bad ") + what + " value `" + s + "`", line);
}

int parse_int(const std::string& s, int line, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (trim(s.substr(used)).empty()) return v;
  } catch (...) {
  }
  throw SpecFileError(std::string("bad ") + what + " value `" + s + "`", line);
}

// g[i][j] or domain[i] index lists.
bool parse_indices(const std::string& key, const std::string& head, int& i,
                   int& j, int want, int line) {
  if (key.rfind(head, 0) != 0) return false;
  std::string rest = key.substr(head.size());
  int got[2] = {0, 0};
  for (int c = 0; c < want; ++c) {
    if (rest.empty() || rest[0] != '[')
      throw SpecFileError("malformed key `" + key + "`", line);
    auto close = rest.find(']');
    if (close == std::string::npos)
      throw SpecFileError("malformed key `" + key + "`", line);
    got[c] = parse_int(rest.substr(1, close - 1), line, "index");
    rest = rest.substr(close + 1);
  }
  if (!trim(rest).empty())
    throw SpecFileError("malformed key `" + key + "`", line);
  i = got[0];
  j = got[1];
  return true;
}

}  // namespace

SolitonData load_soliton(std::istream& is, const std::string& origin) {
  enum class Section { NoneYet, ChartSec, Potential, Params };
  Section section = Section::NoneYet;

  int dim = -1;
  std::vector<std::string> coords;
  std::vector<std::vector<Expr>> gexpr;
  std::vector<std::vector<bool>> gset;
  std::vector<std::pair<double, double>> domain;
  std::vector<bool> domset;
  std::optional<Expr> fexpr;
  std::optional<double> lambda, f0;
  VarBinding params;

  auto need_dim = [&](int line) {
    if (dim < 0)
      throw SpecFileError("`dim` must be set before indexed keys", line);
  };

  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s == "[chart]")
        section = Section::ChartSec;
      else if (s == "[potential]")
        section = Section::Potential;
      else if (s == "[params]")
        section = Section::Params;
      else
        throw SpecFileError("unknown section `" + s + "`", line);
      continue;
    }

    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw SpecFileError("expected `key = value`", line);
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (val.empty()) throw SpecFileError("missing value for `" + key + "`", line);

    switch (section) {
      case Section::NoneYet:
        throw SpecFileError("key outside of any section", line);
      case Section::ChartSec: {
        int i = 0, j = 0;
        if (key == "dim") {
          dim = parse_int(val, line, "dim");
          if (dim < 2) throw SpecFileError("dim must be >= 2", line);
          gexpr.assign(dim, std::vector<Expr>(dim, Expr::constant(0.0)));
          gset.assign(dim, std::vector<bool>(dim, false));
          domain.assign(dim, {0.0, 0.0});
          domset.assign(dim, false);
        } else if (key == "coords") {
          need_dim(line);
          std::istringstream ss(val);
          std::string name;
          while (ss >> name) coords.push_back(name);
          if (static_cast<int>(coords.size()) != dim)
            throw SpecFileError(
                "dimension mismatch: expected " + std::to_string(dim) +
                    " coordinate names, got " + std::to_string(coords.size()),
                line);
        } else if (parse_indices(key, "g", i, j, 2, line)) {
          need_dim(line);
          if (i < 1 || j < 1 || i > dim || j > dim)
            throw SpecFileError("dimension mismatch: metric index out of range in `" +
                                    key + "`",
                                line);
          if (i > j)
            throw SpecFileError(
                "only the upper triangle i <= j may be given (symmetry is implied)",
                line);
          if (gset[i - 1][j - 1])
            throw SpecFileError("duplicate metric entry `" + key + "`", line);
          Expr e = [&] {
            try {
              return parse_expr(val);
            } catch (const ParseError& pe) {
              throw SpecFileError(std::string("bad expression: ") + pe.what(),
                                  line);
            }
          }();
          gexpr[i - 1][j - 1] = e;
          gexpr[j - 1][i - 1] = e;
          gset[i - 1][j - 1] = gset[j - 1][i - 1] = true;
        } else if (parse_indices(key, "domain", i, j, 1, line)) {
          need_dim(line);
          if (i < 1 || i > dim)
            throw SpecFileError("dimension mismatch: domain index out of range", line);
          std::istringstream ss(val);
          double lo, hi;
          if (!(ss >> lo >> hi))
            throw SpecFileError("domain needs `lo hi`", line);
          std::string tail;
          if (ss >> tail) throw SpecFileError("domain needs `lo hi`", line);
          domain[i - 1] = {lo, hi};
          domset[i - 1] = true;
        } else {
          throw SpecFileError("unknown chart key `" + key + "`", line);
        }
        break;
      }
      case Section::Potential: {
        if (key == "f") {
          try {
            fexpr = parse_expr(val);
          } catch (const ParseError& pe) {
            throw SpecFileError(std::string("bad expression: ") + pe.what(),
                                line);
          }
        } else if (key == "lambda") {
          lambda = parse_real(val, line, "lambda");
        } else if (key == "f0") {
          f0 = parse_real(val, line, "f0");
        } else {
          throw SpecFileError("unknown potential key `" + key + "`", line);
        }
        break;
      }
      case Section::Params:
        params.set(key, parse_real(val, line, "parameter"));
        break;
    }
  }

  if (dim < 0) throw SpecFileError("missing required key `dim`", line);
  if (static_cast<int>(coords.size()) != dim)
    throw SpecFileError("missing required key `coords`", line);
  for (int i = 0; i < dim; ++i) {
    if (!gset[i][i])
      throw SpecFileError(
          "missing metric diagonal entry g[" + std::to_string(i + 1) + "][" +
              std::to_string(i + 1) + "]",
          line);
    if (!domset[i])
      throw SpecFileError("missing domain[" + std::to_string(i + 1) + "]", line);
  }
  if (!fexpr) throw SpecFileError("missing required key `f` in [potential]", line);
  if (!lambda)
    throw SpecFileError("missing required key `lambda` in [potential]", line);

  SolitonData sd;
  sd.chart.n = dim;
  sd.chart.coords = coords;
  sd.chart.g = gexpr;
  sd.chart.domain = domain;
  sd.chart.params = params;
  sd.chart.validate();
  sd.f = *fexpr;
  sd.lambda = *lambda;
  sd.f0 = f0;
  sd.name = origin.empty() ? "metric-spec" : origin;
  return sd;
}

SolitonData load_soliton_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open metric-spec file `" + path + "`");
  return load_soliton(is, path);
}

void save_soliton(std::ostream& os, const SolitonData& sd) {
  const Chart& ch = sd.chart;
  os << "[chart]\n";
  os << "dim = " << ch.n << "\n";
  os << "coords =";
  for (const auto& c : ch.coords) os << " " << c;
  os << "\n";
  for (int i = 0; i < ch.n; ++i)
    for (int j = i; j < ch.n; ++j) {
      if (i != j && ch.g[i][j].is_constant(0.0)) continue;
      os << "g[" << i + 1 << "][" << j + 1 << "] = " << to_string(ch.g[i][j])
         << "\n";
    }
  char buf[128];
  for (int i = 0; i < ch.n; ++i) {
    std::snprintf(buf, sizeof(buf), "domain[%d] = %.17g %.17g", i + 1,
                  ch.domain[i].first, ch.domain[i].second);
    os << buf << "\n";
  }
  os << "\n[potential]\n";
  os << "f = " << to_string(sd.f) << "\n";
  std::snprintf(buf, sizeof(buf), "lambda = %.17g", sd.lambda);
  os << buf << "\n";
  if (sd.f0) {
    std::snprintf(buf, sizeof(buf), "f0 = %.17g", *sd.f0);
    os << buf << "\n";
  }
  if (sd.chart.params.size() > 0) {
    os << "\n[params]\n";
    for (const auto& [name, value] : sd.chart.params.items()) {
      std::snprintf(buf, sizeof(buf), "%s = %.17g", name.c_str(), value);
      os << buf << "\n";
    }
  }
}

void save_soliton_file(const std::string& path, const SolitonData& sd) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write metric-spec file `" + path + "`");
  save_soliton(os, sd);
}

}  // namespace schouten
