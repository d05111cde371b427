#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "asympair/sequence.hpp"
#include "asympair/tail_model.hpp"

namespace asympair {

/// Parsed arithmetic expression in one variable.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := ('-'|'+') unary | factor
///   factor := atom ['^' ['-'|'+'] atom]
///   atom   := number | variable | builtin '(' args ')' | '(' expr ')'
/// Builtins: pow, ln, sin, cos, exp, abs, min, max, and for sequences also
/// geo, impulse, table.
class Expression {
 public:
  enum class Variable { index, argument };  // "n" or "x"

  struct Node;

  static Expression parse(const std::string& text, Variable variable);

  /// Throws DomainError on division by zero, ln of a nonpositive value,
  /// invalid pow arguments and non-finite intermediate results.
  double evaluate(double value) const;

  bool is_constant() const;
  /// Tail model implied by the expression structure (index variable only).
  TailModel tail() const;
  /// (alpha, beta) when the expression is alpha * var + beta.
  std::optional<std::pair<double, double>> affine_form() const;
  const std::string& text() const noexcept { return text_; }

 private:
  Expression(std::shared_ptr<const Node> root, std::string text, Variable variable)
      : root_(std::move(root)), text_(std::move(text)), variable_(variable) {}

  std::shared_ptr<const Node> root_;
  std::string text_;
  Variable variable_;
};

Sequence parse_sequence_spec(const std::string& text);

/// Scalar function f: R -> R with an optional declared bound |f| <= M.
class FunctionSpec {
 public:
  FunctionSpec(Expression expression, std::optional<double> declared_bound = std::nullopt);

  double operator()(double u) const { return expression_.evaluate(u); }
  const std::string& text() const noexcept { return expression_.text(); }
  std::optional<double> declared_bound() const noexcept { return declared_bound_; }

 private:
  Expression expression_;
  std::optional<double> declared_bound_;
};

FunctionSpec parse_function_spec(const std::string& text, std::optional<double> declared_bound = std::nullopt);

}  // namespace asympair
