#include "schouten/expr.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace schouten {

namespace detail {

struct ExprNode {
  ExprKind kind;
  double value = 0.0;    // Constant
  std::string name;      // Variable
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  std::shared_ptr<const ExprNode> a, b;
};

namespace {

std::atomic<std::size_t> g_node_budget{2'000'000};

// Installed by the outermost differentiate() call; counts nodes built
// while a derivative is under construction.
thread_local std::size_t* t_node_counter = nullptr;

void count_node() {
  if (t_node_counter != nullptr) {
    if (++*t_node_counter > g_node_budget.load(std::memory_order_relaxed)) {
      throw NodeBudgetError(
          "derivative exceeds the node budget of " +
          std::to_string(g_node_budget.load()) +
          " nodes; the metric expressions are too complex for symbolic "
          "differentiation");
    }
  }
}

std::shared_ptr<const ExprNode> make_const_node(double v) {
  count_node();
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Constant;
  n->value = v;
  return n;
}

}  // namespace
}  // namespace detail

using detail::ExprNode;

Expr::Expr() : n_(detail::make_const_node(0.0)) {}

Expr Expr::constant(double v) {
  return Expr(detail::make_const_node(v));
}

Expr Expr::variable(std::string name) {
  detail::count_node();
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Variable;
  n->name = std::move(name);
  return Expr(std::move(n));
}

ExprKind Expr::kind() const { return n_->kind; }
double Expr::value() const { return n_->value; }
const std::string& Expr::name() const { return n_->name; }
UnaryOp Expr::unary_op() const { return n_->uop; }
BinaryOp Expr::binary_op() const { return n_->bop; }
Expr Expr::operand() const { return Expr(n_->a); }
Expr Expr::lhs() const { return Expr(n_->a); }
Expr Expr::rhs() const { return Expr(n_->b); }

bool Expr::is_constant(double v) const {
  return n_->kind == ExprKind::Constant && n_->value == v;
}

bool Expr::depends_on(std::string_view var) const {
  switch (n_->kind) {
    case ExprKind::Constant:
      return false;
    case ExprKind::Variable:
      return n_->name == var;
    case ExprKind::Unary:
      return Expr(n_->a).depends_on(var);
    case ExprKind::Binary:
      return Expr(n_->a).depends_on(var) || Expr(n_->b).depends_on(var);
  }
  return false;
}

bool Expr::is_closed() const {
  switch (n_->kind) {
    case ExprKind::Constant:
      return true;
    case ExprKind::Variable:
      return false;
    case ExprKind::Unary:
      return Expr(n_->a).is_closed();
    case ExprKind::Binary:
      return Expr(n_->a).is_closed() && Expr(n_->b).is_closed();
  }
  return true;
}

std::size_t Expr::node_count() const {
  switch (n_->kind) {
    case ExprKind::Constant:
    case ExprKind::Variable:
      return 1;
    case ExprKind::Unary:
      return 1 + Expr(n_->a).node_count();
    case ExprKind::Binary:
      return 1 + Expr(n_->a).node_count() + Expr(n_->b).node_count();
  }
  return 1;
}

bool same_node(const Expr& a, const Expr& b) { return a.n_ == b.n_; }

void set_node_budget(std::size_t budget) { detail::g_node_budget = budget; }
std::size_t node_budget() { return detail::g_node_budget; }

// ---------------------------------------------------------------------------
// Smart constructors

Expr make_unary(UnaryOp op, Expr a) {
  detail::count_node();
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Unary;
  n->uop = op;
  n->a = a.n_;
  return Expr(std::move(n));
}

Expr make_binary(BinaryOp op, Expr a, Expr b) {
  detail::count_node();
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Binary;
  n->bop = op;
  n->a = a.n_;
  n->b = b.n_;
  return Expr(std::move(n));
}

Expr operator+(Expr a, Expr b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.value() + b.value());
  return make_binary(BinaryOp::Add, std::move(a), std::move(b));
}

Expr operator-(Expr a, Expr b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -std::move(b);
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.value() - b.value());
  return make_binary(BinaryOp::Sub, std::move(a), std::move(b));
}

Expr operator*(Expr a, Expr b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.value() * b.value());
  return make_binary(BinaryOp::Mul, std::move(a), std::move(b));
}

Expr operator/(Expr a, Expr b) {
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant() && b.is_constant() && b.value() != 0.0)
    return Expr::constant(a.value() / b.value());
  return make_binary(BinaryOp::Div, std::move(a), std::move(b));
}

Expr operator-(Expr a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.kind() == ExprKind::Unary && a.unary_op() == UnaryOp::Neg)
    return a.operand();
  return make_unary(UnaryOp::Neg, std::move(a));
}

Expr pow(Expr base, Expr exponent) {
  if (exponent.is_constant(1.0)) return base;
  if (exponent.is_constant(0.0)) return Expr::constant(1.0);
  if (base.is_constant(1.0)) return Expr::constant(1.0);
  if (base.is_constant() && exponent.is_constant()) {
    double v = std::pow(base.value(), exponent.value());
    if (std::isfinite(v)) return Expr::constant(v);
  }
  return make_binary(BinaryOp::Pow, std::move(base), std::move(exponent));
}

Expr pow(Expr base, double exponent) {
  return pow(std::move(base), Expr::constant(exponent));
}

namespace {

Expr fold_unary(UnaryOp op, Expr a, double (*fn)(double), bool (*ok)(double)) {
  if (a.is_constant() && ok(a.value())) {
    double v = fn(a.value());
    if (std::isfinite(v)) return Expr::constant(v);
  }
  return make_unary(op, std::move(a));
}

bool always(double) { return true; }
bool positive(double v) { return v > 0.0; }
bool nonnegative(double v) { return v >= 0.0; }

}  // namespace

Expr sin(Expr a) { return fold_unary(UnaryOp::Sin, std::move(a), std::sin, always); }
Expr cos(Expr a) { return fold_unary(UnaryOp::Cos, std::move(a), std::cos, always); }
Expr exp(Expr a) { return fold_unary(UnaryOp::Exp, std::move(a), std::exp, always); }
Expr log(Expr a) { return fold_unary(UnaryOp::Log, std::move(a), std::log, positive); }
Expr sinh(Expr a) { return fold_unary(UnaryOp::Sinh, std::move(a), std::sinh, always); }
Expr cosh(Expr a) { return fold_unary(UnaryOp::Cosh, std::move(a), std::cosh, always); }
Expr tanh(Expr a) { return fold_unary(UnaryOp::Tanh, std::move(a), std::tanh, always); }
Expr sqrt(Expr a) { return fold_unary(UnaryOp::Sqrt, std::move(a), std::sqrt, nonnegative); }

// ---------------------------------------------------------------------------
// VarBinding

void VarBinding::set(std::string name, double value) {
  for (auto& [n, v] : vars_) {
    if (n == name) {
      v = value;
      return;
    }
  }
  vars_.emplace_back(std::move(name), value);
}

bool VarBinding::has(std::string_view name) const {
  for (const auto& [n, v] : vars_)
    if (n == name) return true;
  return false;
}

double VarBinding::get(std::string_view name) const {
  for (const auto& [n, v] : vars_)
    if (n == name) return v;
  throw EvalError("unbound variable `" + std::string(name) + "`");
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Parser {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected `") + c + "`", pos);
  }

  Expr parse_expression() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+'))
        e = std::move(e) + parse_term();
      else if (accept('-'))
        e = std::move(e) - parse_term();
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (accept('*'))
        e = std::move(e) * parse_factor();
      else if (accept('/'))
        e = std::move(e) / parse_factor();
      else
        return e;
    }
  }

  Expr parse_factor() {
    if (accept('-')) return -parse_factor();
    Expr b = parse_base();
    if (accept('^')) return pow(std::move(b), parse_factor());
    return b;
  }

  Expr parse_base() {
    char c = peek();
    if (c == '(') {
      ++pos;
      Expr e = parse_expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_name();
    if (c == '\0') throw ParseError("unexpected end of input", pos);
    throw ParseError(std::string("unexpected character `") + c + "`", pos);
  }

  Expr parse_number() {
    std::size_t start = pos;
    bool digits = false;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
      ++pos;
      digits = true;
    }
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        ++pos;
        digits = true;
      }
    }
    if (!digits) throw ParseError("malformed number", start);
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
          ++pos;
      } else {
        pos = mark;  // `e` belongs to a following name, not this number
      }
    }
    double v = std::strtod(std::string(src.substr(start, pos - start)).c_str(), nullptr);
    if (!std::isfinite(v)) throw ParseError("number out of range", start);
    return Expr::constant(v);
  }

  Expr parse_name() {
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    std::string name(src.substr(start, pos - start));
    if (peek() == '(') {
      ++pos;
      Expr arg = parse_expression();
      expect(')');
      if (name == "sin") return sin(std::move(arg));
      if (name == "cos") return cos(std::move(arg));
      if (name == "exp") return exp(std::move(arg));
      if (name == "log") return log(std::move(arg));
      if (name == "sinh") return sinh(std::move(arg));
      if (name == "cosh") return cosh(std::move(arg));
      if (name == "tanh") return tanh(std::move(arg));
      if (name == "sqrt") return sqrt(std::move(arg));
      throw ParseError("unknown function name `" + name + "`", start);
    }
    return Expr::variable(std::move(name));
  }
};

}  // namespace

Expr parse_expr(std::string_view source) {
  Parser p{source};
  if (p.peek() == '\0') throw ParseError("empty input", 0);
  Expr e = p.parse_expression();
  if (p.peek() != '\0')
    throw ParseError(std::string("unexpected trailing character `") + p.peek() + "`",
                     p.pos);
  return e;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

// Binding strengths used by the printer.  A child is parenthesized when
// its level is below the minimum its context requires.
constexpr int kLevelAddSub = 10;
constexpr int kLevelMulDiv = 20;
constexpr int kLevelNeg = 30;
constexpr int kLevelPow = 40;
constexpr int kLevelAtom = 100;

int print_level(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return e.value() < 0.0 ? kLevelNeg : kLevelAtom;
    case ExprKind::Variable:
      return kLevelAtom;
    case ExprKind::Unary:
      return e.unary_op() == UnaryOp::Neg ? kLevelNeg : kLevelAtom;
    case ExprKind::Binary:
      switch (e.binary_op()) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return kLevelAddSub;
        case BinaryOp::Mul:
        case BinaryOp::Div:
          return kLevelMulDiv;
        case BinaryOp::Pow:
          return kLevelPow;
      }
  }
  return kLevelAtom;
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sinh: return "sinh";
    case UnaryOp::Cosh: return "cosh";
    case UnaryOp::Tanh: return "tanh";
    case UnaryOp::Sqrt: return "sqrt";
  }
  return "?";
}

void print_rec(std::string& out, const Expr& e, int min_level) {
  bool parens = print_level(e) < min_level;
  if (parens) out += '(';
  switch (e.kind()) {
    case ExprKind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", e.value());
      out += buf;
      break;
    }
    case ExprKind::Variable:
      out += e.name();
      break;
    case ExprKind::Unary:
      if (e.unary_op() == UnaryOp::Neg) {
        out += '-';
        print_rec(out, e.operand(), kLevelMulDiv);
      } else {
        out += unary_name(e.unary_op());
        out += '(';
        print_rec(out, e.operand(), 0);
        out += ')';
      }
      break;
    case ExprKind::Binary: {
      switch (e.binary_op()) {
        case BinaryOp::Add:
          print_rec(out, e.lhs(), kLevelAddSub);
          out += " + ";
          print_rec(out, e.rhs(), kLevelAddSub);
          break;
        case BinaryOp::Sub:
          print_rec(out, e.lhs(), kLevelAddSub);
          out += " - ";
          print_rec(out, e.rhs(), kLevelAddSub + 1);
          break;
        case BinaryOp::Mul:
          print_rec(out, e.lhs(), kLevelMulDiv);
          out += "*";
          print_rec(out, e.rhs(), kLevelMulDiv);
          break;
        case BinaryOp::Div:
          print_rec(out, e.lhs(), kLevelMulDiv);
          out += "/";
          print_rec(out, e.rhs(), kLevelMulDiv + 1);
          break;
        case BinaryOp::Pow:
          print_rec(out, e.lhs(), kLevelPow + 1);
          out += "^";
          print_rec(out, e.rhs(), kLevelNeg);
          break;
      }
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print_rec(out, e, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const Expr& e, const VarBinding& b) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return e.value();
    case ExprKind::Variable:
      return b.get(e.name());
    case ExprKind::Unary: {
      double v = evaluate(e.operand(), b);
      switch (e.unary_op()) {
        case UnaryOp::Neg: return -v;
        case UnaryOp::Sin: return std::sin(v);
        case UnaryOp::Cos: return std::cos(v);
        case UnaryOp::Exp: return std::exp(v);
        case UnaryOp::Log:
          if (v <= 0.0) throw DomainError("log of non-positive value", to_string(e));
          return std::log(v);
        case UnaryOp::Sinh: return std::sinh(v);
        case UnaryOp::Cosh: return std::cosh(v);
        case UnaryOp::Tanh: return std::tanh(v);
        case UnaryOp::Sqrt:
          if (v < 0.0) throw DomainError("sqrt of negative value", to_string(e));
          return std::sqrt(v);
      }
      return 0.0;
    }
    case ExprKind::Binary: {
      double x = evaluate(e.lhs(), b);
      double y = evaluate(e.rhs(), b);
      switch (e.binary_op()) {
        case BinaryOp::Add: return x + y;
        case BinaryOp::Sub: return x - y;
        case BinaryOp::Mul: return x * y;
        case BinaryOp::Div:
          if (y == 0.0) throw DomainError("division by zero", to_string(e));
          return x / y;
        case BinaryOp::Pow: {
          if (x == 0.0 && y < 0.0)
            throw DomainError("zero raised to a negative power", to_string(e));
          double r = std::pow(x, y);
          if (std::isnan(r))
            throw DomainError("invalid power (negative base, non-integer exponent)",
                              to_string(e));
          return r;
        }
      }
      return 0.0;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

struct DerivKey {
  const ExprNode* node;
  std::string var;
  bool operator==(const DerivKey& o) const {
    return node == o.node && var == o.var;
  }
};

struct DerivKeyHash {
  std::size_t operator()(const DerivKey& k) const {
    return std::hash<const void*>()(k.node) * 1000003u ^
           std::hash<std::string>()(k.var);
  }
};

// Value keeps the source expression alive so node addresses in keys stay
// valid for the lifetime of the entry.
struct DerivEntry {
  Expr source;
  Expr derivative;
};

std::shared_mutex g_deriv_mu;
std::unordered_map<DerivKey, DerivEntry, DerivKeyHash> g_deriv_cache;

Expr differentiate_impl(const Expr& e, const std::string& var) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return Expr::constant(0.0);
    case ExprKind::Variable:
      return Expr::constant(e.name() == var ? 1.0 : 0.0);
    default:
      break;
  }
  if (!e.depends_on(var)) return Expr::constant(0.0);

  DerivKey key{e.raw(), var};
  {
    std::shared_lock lock(g_deriv_mu);
    auto it = g_deriv_cache.find(key);
    if (it != g_deriv_cache.end()) return it->second.derivative;
  }

  Expr result;
  if (e.kind() == ExprKind::Unary) {
    Expr u = e.operand();
    Expr du = differentiate_impl(u, var);
    switch (e.unary_op()) {
      case UnaryOp::Neg: result = -du; break;
      case UnaryOp::Sin: result = cos(u) * du; break;
      case UnaryOp::Cos: result = -(sin(u) * du); break;
      case UnaryOp::Exp: result = exp(u) * du; break;
      case UnaryOp::Log: result = du / u; break;
      case UnaryOp::Sinh: result = cosh(u) * du; break;
      case UnaryOp::Cosh: result = sinh(u) * du; break;
      case UnaryOp::Tanh:
        result = (Expr::constant(1.0) - pow(tanh(u), 2.0)) * du;
        break;
      case UnaryOp::Sqrt:
        result = du / (Expr::constant(2.0) * sqrt(u));
        break;
    }
  } else {
    Expr u = e.lhs();
    Expr v = e.rhs();
    switch (e.binary_op()) {
      case BinaryOp::Add:
        result = differentiate_impl(u, var) + differentiate_impl(v, var);
        break;
      case BinaryOp::Sub:
        result = differentiate_impl(u, var) - differentiate_impl(v, var);
        break;
      case BinaryOp::Mul:
        result = differentiate_impl(u, var) * v + u * differentiate_impl(v, var);
        break;
      case BinaryOp::Div: {
        Expr du = differentiate_impl(u, var);
        Expr dv = differentiate_impl(v, var);
        result = (du * v - u * dv) / pow(v, 2.0);
        break;
      }
      case BinaryOp::Pow: {
        if (!v.is_closed())
          throw EvalError(
              "cannot differentiate pow with a variable exponent: `" +
              to_string(e) + "`");
        Expr du = differentiate_impl(u, var);
        result = v * pow(u, v - Expr::constant(1.0)) * du;
        break;
      }
    }
  }

  {
    std::unique_lock lock(g_deriv_mu);
    g_deriv_cache.emplace(key, DerivEntry{e, result});
  }
  return result;
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& var) {
  if (detail::t_node_counter != nullptr) return differentiate_impl(e, var);
  std::size_t built = 0;
  detail::t_node_counter = &built;
  try {
    Expr r = differentiate_impl(e, var);
    detail::t_node_counter = nullptr;
    return r;
  } catch (...) {
    detail::t_node_counter = nullptr;
    throw;
  }
}

// ---------------------------------------------------------------------------
// Simplification

Expr simplify(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant:
    case ExprKind::Variable:
      return e;
    case ExprKind::Unary: {
      Expr a = simplify(e.operand());
      switch (e.unary_op()) {
        case UnaryOp::Neg: return -std::move(a);
        case UnaryOp::Sin: return sin(std::move(a));
        case UnaryOp::Cos: return cos(std::move(a));
        case UnaryOp::Exp: return exp(std::move(a));
        case UnaryOp::Log: return log(std::move(a));
        case UnaryOp::Sinh: return sinh(std::move(a));
        case UnaryOp::Cosh: return cosh(std::move(a));
        case UnaryOp::Tanh: return tanh(std::move(a));
        case UnaryOp::Sqrt: return sqrt(std::move(a));
      }
      return e;
    }
    case ExprKind::Binary: {
      Expr a = simplify(e.lhs());
      Expr b = simplify(e.rhs());
      switch (e.binary_op()) {
        case BinaryOp::Add: return std::move(a) + std::move(b);
        case BinaryOp::Sub: return std::move(a) - std::move(b);
        case BinaryOp::Mul: return std::move(a) * std::move(b);
        case BinaryOp::Div: return std::move(a) / std::move(b);
        case BinaryOp::Pow: return pow(std::move(a), std::move(b));
      }
      return e;
    }
  }
  return e;
}

}  // namespace schouten
