#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace schouten {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax error while parsing an expression. `offset` is the byte offset
/// into the source string where the error was detected.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation failure: unbound variable, or a numeric domain fault
/// (division by zero, log of a non-positive number, sqrt of a negative).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Domain fault carrying the offending subexpression in printed form.
class DomainError : public EvalError {
 public:
  DomainError(const std::string& msg, std::string subexpr)
      : EvalError(msg + " in subexpression `" + subexpr + "`"),
        subexpr_(std::move(subexpr)) {}
  const std::string& subexpression() const { return subexpr_; }

 private:
  std::string subexpr_;
};

/// Symbolic differentiation exceeded the configured node budget; the
/// metric expressions are too complex for the symbolic pipeline.
class NodeBudgetError : public Error {
 public:
  using Error::Error;
};

/// Structural problem with a chart (dimension mismatch, asymmetric
/// metric expression matrix, point outside the domain box).
class ChartError : public Error {
 public:
  using Error::Error;
};

/// Evaluated metric is degenerate or not positive definite at a point.
class DegenerateMetricError : public ChartError {
 public:
  using ChartError::ChartError;
};

/// An operation's precondition is not met (critical point of the
/// potential, first-integral hypothesis violated, too few samples, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The two algebraic routes to the Bach tensor disagree.  This means the
/// curvature sign conventions are internally inconsistent and no result
/// can be trusted, so it is a hard error rather than a residual.
class ConventionError : public Error {
 public:
  using Error::Error;
};

/// Error in a metric-spec input file, with the 1-based line number.
class SpecFileError : public Error {
 public:
  SpecFileError(const std::string& msg, int line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace schouten
