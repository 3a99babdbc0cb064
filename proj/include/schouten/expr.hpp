#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "schouten/errors.hpp"

namespace schouten {

enum class ExprKind { Constant, Variable, Unary, Binary };
enum class UnaryOp { Neg, Sin, Cos, Exp, Log, Sinh, Cosh, Tanh, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

namespace detail {
struct ExprNode;
}

/// Immutable symbolic expression over named variables.  Copies are cheap
/// (shared subtrees) and values are safe to share across threads.
class Expr {
 public:
  /// Constant zero.
  Expr();

  static Expr constant(double v);
  static Expr variable(std::string name);

  ExprKind kind() const;
  double value() const;             // Constant nodes only
  const std::string& name() const;  // Variable nodes only
  UnaryOp unary_op() const;
  BinaryOp binary_op() const;
  Expr operand() const;  // Unary child
  Expr lhs() const;      // Binary children
  Expr rhs() const;

  bool is_constant() const { return kind() == ExprKind::Constant; }
  bool is_constant(double v) const;
  /// True if a Variable node with this name occurs anywhere in the tree.
  bool depends_on(std::string_view var) const;
  /// True if no Variable node occurs anywhere in the tree.
  bool is_closed() const;

  std::size_t node_count() const;

  friend bool same_node(const Expr& a, const Expr& b);
  const detail::ExprNode* raw() const { return n_.get(); }

 private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> n) : n_(std::move(n)) {}
  std::shared_ptr<const detail::ExprNode> n_;
  friend Expr make_unary(UnaryOp, Expr);
  friend Expr make_binary(BinaryOp, Expr, Expr);
};

/// Ordered list of (name, value) bindings; names unique, order matches
/// the owning chart's coordinate order.
class VarBinding {
 public:
  VarBinding() = default;
  void set(std::string name, double value);
  bool has(std::string_view name) const;
  double get(std::string_view name) const;  // throws EvalError if absent
  std::size_t size() const { return vars_.size(); }
  const std::vector<std::pair<std::string, double>>& items() const {
    return vars_;
  }

 private:
  std::vector<std::pair<std::string, double>> vars_;
};

// Structure-preserving constructors.  These fold the trivial algebraic
// identities (0*a, a+0, constant op constant, ...) on the fly so that
// iterated differentiation does not balloon the tree.
Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);
Expr pow(Expr base, Expr exponent);
Expr pow(Expr base, double exponent);
Expr sin(Expr a);
Expr cos(Expr a);
Expr exp(Expr a);
Expr log(Expr a);
Expr sinh(Expr a);
Expr cosh(Expr a);
Expr tanh(Expr a);
Expr sqrt(Expr a);

/// Parse a single expression.
///
/// Grammar (whitespace insignificant):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' factor)?
///   base   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'
/// '^' is right-associative and binds tighter than the unary minus of its
/// base.  Throws ParseError with a byte offset on malformed input and on
/// unknown function names.
Expr parse_expr(std::string_view source);

/// Infix form that parses back to an evaluation-equal expression.
std::string to_string(const Expr& e);

/// IEEE double evaluation.  Unbound variables throw EvalError; division
/// by zero, log of a non-positive value, sqrt of a negative value and
/// invalid pow combinations throw DomainError naming the subexpression.
double evaluate(const Expr& e, const VarBinding& b);

/// Exact symbolic partial derivative with respect to `var`.  Results are
/// memoized per (node, variable) pair; the cache is thread safe.  pow is
/// differentiated as a*u^(a-1)*u' and therefore requires the exponent to
/// be variable-free.  Throws NodeBudgetError if the derivative tree would
/// exceed the configured node budget.
Expr differentiate(const Expr& e, const std::string& var);

/// Value-preserving cleanup: constant folding plus the neutral-element
/// rules the smart constructors apply.
Expr simplify(const Expr& e);

/// Node budget for a single differentiate() call (default 2,000,000).
void set_node_budget(std::size_t budget);
std::size_t node_budget();

}  // namespace schouten
