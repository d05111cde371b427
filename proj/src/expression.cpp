#include "asympair/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "asympair/format.hpp"

namespace asympair {

namespace {

enum class Op { number, variable, negate, add, sub, mul, div, power, call };
enum class Fn { pow, geo, ln, sin, cos, exp, abs, min, max, impulse, table };

// c * var^k, tracked so that reciprocals keep a power tail.
struct Monomial {
  double coefficient;
  double exponent;
};

struct Builtin {
  const char* name;
  Fn fn;
  int min_args;
  int max_args;  // -1: unbounded
  bool sequence_only;
};

constexpr Builtin kBuiltins[] = {
    {"pow", Fn::pow, 2, 2, false},  {"geo", Fn::geo, 1, 1, true},    {"ln", Fn::ln, 1, 1, false},
    {"sin", Fn::sin, 1, 1, false},  {"cos", Fn::cos, 1, 1, false},   {"exp", Fn::exp, 1, 1, false},
    {"abs", Fn::abs, 1, 1, false},  {"min", Fn::min, 2, -1, false},  {"max", Fn::max, 2, -1, false},
    {"impulse", Fn::impulse, 1, 1, true}, {"table", Fn::table, 1, -1, true},
};

double checked(double value, const char* what) {
  if (!std::isfinite(value)) throw DomainError(std::string("non-finite result in ") + what);
  return value;
}

double checked_pow(double base, double exponent) {
  if (base == 0.0 && exponent < 0.0) throw DomainError("pow: zero base with negative exponent");
  if (base < 0.0 && std::floor(exponent) != exponent) throw DomainError("pow: negative base with fractional exponent");
  return checked(std::pow(base, exponent), "pow");
}

}  // namespace

struct Expression::Node {
  Op op = Op::number;
  Fn fn = Fn::pow;
  double value = 0.0;
  std::vector<std::shared_ptr<const Node>> args;
  std::vector<double> table;
  bool constant = true;
  TailModel tail = FiniteTail{1};
  std::optional<Monomial> monomial;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

double eval(const Node& node, double x) {
  switch (node.op) {
    case Op::number:
      return node.value;
    case Op::variable:
      return x;
    case Op::negate:
      return -eval(*node.args[0], x);
    case Op::add:
      return checked(eval(*node.args[0], x) + eval(*node.args[1], x), "addition");
    case Op::sub:
      return checked(eval(*node.args[0], x) - eval(*node.args[1], x), "subtraction");
    case Op::mul:
      return checked(eval(*node.args[0], x) * eval(*node.args[1], x), "multiplication");
    case Op::div: {
      const double denominator = eval(*node.args[1], x);
      if (denominator == 0.0) throw DomainError("division by zero");
      return checked(eval(*node.args[0], x) / denominator, "division");
    }
    case Op::power:
      return checked_pow(eval(*node.args[0], x), eval(*node.args[1], x));
    case Op::call:
      break;
  }
  switch (node.fn) {
    case Fn::pow:
      return checked_pow(eval(*node.args[0], x), eval(*node.args[1], x));
    case Fn::geo:
      return checked_pow(node.value, x);
    case Fn::ln: {
      const double u = eval(*node.args[0], x);
      if (!(u > 0.0)) throw DomainError("ln of nonpositive value " + format_number(u));
      return std::log(u);
    }
    case Fn::sin:
      return std::sin(eval(*node.args[0], x));
    case Fn::cos:
      return std::cos(eval(*node.args[0], x));
    case Fn::exp:
      return checked(std::exp(eval(*node.args[0], x)), "exp");
    case Fn::abs:
      return std::abs(eval(*node.args[0], x));
    case Fn::min:
    case Fn::max: {
      double best = eval(*node.args[0], x);
      for (std::size_t i = 1; i < node.args.size(); ++i) {
        const double v = eval(*node.args[i], x);
        best = node.fn == Fn::min ? std::min(best, v) : std::max(best, v);
      }
      return best;
    }
    case Fn::impulse:
      return x == node.value ? 1.0 : 0.0;
    case Fn::table: {
      const double k = std::floor(x);
      if (k != x || k < 1.0) throw DomainError("table needs a positive integer index");
      return k <= static_cast<double>(node.table.size()) ? node.table[static_cast<std::size_t>(k) - 1] : 0.0;
    }
  }
  return 0.0;
}

TailModel monomial_tail(const Monomial& m) {
  if (m.coefficient == 0.0) return FiniteTail{1};
  return PowerTail{std::abs(m.coefficient), m.exponent, 1};
}

std::shared_ptr<Node> make_number(double value) {
  auto node = std::make_shared<Node>();
  node->op = Op::number;
  node->value = value;
  node->tail = tail_of_constant(value);
  node->monomial = Monomial{value, 0.0};
  return node;
}

class Parser {
 public:
  Parser(const std::string& text, Expression::Variable variable) : text_(text), variable_(variable) {}

  NodePtr run() {
    skip_space();
    if (at_end()) fail("empty expression");
    NodePtr root = expr();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return root;
  }

 private:
  const std::string& text_;
  Expression::Variable variable_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  std::pair<int, int> location(std::size_t pos) const {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < pos && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    return {line, column};
  }

  [[noreturn]] void fail(const std::string& what, std::size_t pos) const {
    auto [line, column] = location(pos);
    throw ParseError(what, line, column);
  }
  [[noreturn]] void fail(const std::string& what) const { fail(what, pos_); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Op::add, lhs, term());
      } else if (accept('-')) {
        lhs = binary(Op::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      skip_space();
      const std::size_t where = pos_;
      if (accept('*')) {
        lhs = binary(Op::mul, lhs, unary());
      } else if (accept('/')) {
        NodePtr rhs = unary();
        if (rhs->constant && rhs->value == 0.0) fail("division by zero", where);
        lhs = binary(Op::div, lhs, rhs);
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return negate(unary());
    if (accept('+')) return unary();
    return factor();
  }

  NodePtr factor() {
    NodePtr base = atom();
    if (!accept('^')) return base;
    NodePtr exponent;
    if (accept('-')) {
      exponent = negate(atom());
    } else {
      accept('+');
      exponent = atom();
    }
    return power_node(Op::power, Fn::pow, base, exponent);
  }

  NodePtr atom() {
    skip_space();
    const std::size_t start = pos_;
    if (at_end()) fail("unexpected end of expression");
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      const char* var = variable_ == Expression::Variable::index ? "n" : "x";
      if (name == var) {
        auto node = std::make_shared<Node>();
        node->op = Op::variable;
        node->constant = false;
        node->tail = PowerTail{1.0, 1.0, 1};
        node->monomial = Monomial{1.0, 1.0};
        return node;
      }
      for (const Builtin& builtin : kBuiltins) {
        if (name == builtin.name) return call(builtin, start);
      }
      fail("unknown identifier '" + name + "'", start);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_number(value);
  }

  NodePtr call(const Builtin& builtin, std::size_t start) {
    if (builtin.sequence_only && variable_ != Expression::Variable::index) {
      fail(std::string("'") + builtin.name + "' is only available in sequence expressions", start);
    }
    expect('(');
    std::vector<NodePtr> args;
    std::vector<std::size_t> where;
    skip_space();
    where.push_back(pos_);
    args.push_back(expr());
    while (accept(',')) {
      skip_space();
      where.push_back(pos_);
      args.push_back(expr());
    }
    expect(')');
    const int count = static_cast<int>(args.size());
    if (count < builtin.min_args || (builtin.max_args >= 0 && count > builtin.max_args)) {
      fail(std::string("wrong number of arguments to '") + builtin.name + "'", start);
    }

    auto constant_arg = [&](std::size_t i) {
      if (!args[i]->constant) fail(std::string("argument of '") + builtin.name + "' must be a constant", where[i]);
      return args[i]->value;
    };

    if (builtin.fn == Fn::pow) return power_node(Op::call, Fn::pow, args[0], args[1]);

    auto node = std::make_shared<Node>();
    node->op = Op::call;
    node->fn = builtin.fn;
    node->args = args;
    node->constant = true;
    for (const auto& arg : args) node->constant = node->constant && arg->constant;

    switch (builtin.fn) {
      case Fn::geo: {
        const double rho = constant_arg(0);
        if (!(std::abs(rho) < 1.0)) {
          fail("parameter out of range: geo ratio must satisfy |rho| < 1, got " + format_number(rho), where[0]);
        }
        node->value = rho;
        node->constant = false;
        node->args.clear();
        if (rho == 0.0) {
          node->tail = FiniteTail{1};
        } else {
          node->tail = GeometricTail{1.0, std::abs(rho), 1};
        }
        return node;
      }
      case Fn::impulse: {
        const double p = constant_arg(0);
        if (!(p >= 1.0) || std::floor(p) != p) fail("impulse index must be a positive integer", where[0]);
        node->value = p;
        node->constant = false;
        node->args.clear();
        node->tail = FiniteTail{static_cast<Index>(p) + 1};
        return node;
      }
      case Fn::table: {
        for (std::size_t i = 0; i < args.size(); ++i) node->table.push_back(constant_arg(i));
        node->constant = false;
        node->args.clear();
        node->tail = FiniteTail{static_cast<Index>(node->table.size()) + 1};
        return node;
      }
      default:
        break;
    }
    if (node->constant) return fold(node, start);

    const TailModel& arg_tail = args[0]->tail;
    switch (builtin.fn) {
      case Fn::sin: {
        // |sin u| <= min(1, |u|).
        const auto* p = std::get_if<PowerTail>(&arg_tail);
        const bool decaying = std::holds_alternative<GeometricTail>(arg_tail) || is_finite(arg_tail) ||
                              (p != nullptr && p->exponent <= 0.0);
        node->tail = decaying ? arg_tail : TailModel{PowerTail{1.0, 0.0, 1}};
        break;
      }
      case Fn::cos:
        node->tail = PowerTail{1.0, 0.0, 1};
        break;
      case Fn::abs:
        node->tail = arg_tail;
        break;
      case Fn::exp: {
        // exp(alpha n + beta) with alpha < 0 is geometric.
        node->tail = UnknownTail{};
        if (auto affine = affine_of(*args[0]); affine && affine->first < 0.0) {
          node->tail = GeometricTail{std::exp(affine->second), std::exp(affine->first), 1};
        }
        break;
      }
      case Fn::ln:
        node->tail = UnknownTail{};
        break;
      case Fn::min:
      case Fn::max: {
        TailModel tail = args[0]->tail;
        for (std::size_t i = 1; i < args.size(); ++i) tail = tail_sum(tail, args[i]->tail);
        node->tail = tail;
        break;
      }
      default:
        break;
    }
    return node;
  }

  NodePtr fold(const std::shared_ptr<Node>& node, std::size_t where) {
    try {
      return make_number(eval(*node, 0.0));
    } catch (const DomainError& e) {
      fail(e.what(), where);
    }
  }

  NodePtr negate(const NodePtr& arg) {
    if (arg->constant) return make_number(-arg->value);
    auto node = std::make_shared<Node>();
    node->op = Op::negate;
    node->args = {arg};
    node->constant = false;
    node->tail = arg->tail;
    if (arg->monomial) node->monomial = Monomial{-arg->monomial->coefficient, arg->monomial->exponent};
    return node;
  }

  NodePtr binary(Op op, const NodePtr& lhs, const NodePtr& rhs) {
    auto node = std::make_shared<Node>();
    node->op = op;
    node->args = {lhs, rhs};
    node->constant = lhs->constant && rhs->constant;
    if (node->constant) return fold(node, pos_);

    const auto& a = lhs->monomial;
    const auto& b = rhs->monomial;
    switch (op) {
      case Op::add:
      case Op::sub:
        node->tail = tail_sum(lhs->tail, rhs->tail);
        break;
      case Op::mul:
        if (a && b) {
          node->monomial = Monomial{a->coefficient * b->coefficient, a->exponent + b->exponent};
          node->tail = monomial_tail(*node->monomial);
        } else if (lhs->constant) {
          node->tail = tail_scale(rhs->tail, lhs->value);
        } else if (rhs->constant) {
          node->tail = tail_scale(lhs->tail, rhs->value);
        } else {
          node->tail = tail_product(lhs->tail, rhs->tail);
        }
        break;
      case Op::div:
        if (a && b) {
          node->monomial = Monomial{a->coefficient / b->coefficient, a->exponent - b->exponent};
          node->tail = monomial_tail(*node->monomial);
        } else if (rhs->constant) {
          node->tail = tail_scale(lhs->tail, 1.0 / rhs->value);
        } else if (b) {
          node->tail = tail_product(lhs->tail, monomial_tail(Monomial{1.0 / b->coefficient, -b->exponent}));
        } else {
          node->tail = UnknownTail{};
        }
        break;
      default:
        break;
    }
    return node;
  }

  NodePtr power_node(Op op, Fn fn, const NodePtr& base, const NodePtr& exponent) {
    auto node = std::make_shared<Node>();
    node->op = op;
    node->fn = fn;
    node->args = {base, exponent};
    node->constant = base->constant && exponent->constant;
    if (node->constant) return fold(node, pos_);

    if (exponent->constant) {
      const double k = exponent->value;
      if (base->monomial && base->monomial->coefficient > 0.0) {
        node->monomial = Monomial{std::pow(base->monomial->coefficient, k), base->monomial->exponent * k};
        node->tail = monomial_tail(*node->monomial);
      } else {
        node->tail = tail_power(base->tail, k);
      }
    } else if (base->constant && exponent->op == Op::variable && std::abs(base->value) < 1.0) {
      node->tail = base->value == 0.0 ? TailModel{FiniteTail{1}} : TailModel{GeometricTail{1.0, std::abs(base->value), 1}};
    } else {
      node->tail = UnknownTail{};
    }
    return node;
  }

 public:
  static std::optional<std::pair<double, double>> affine_of(const Node& node) {
    using Affine = std::optional<std::pair<double, double>>;
    switch (node.op) {
      case Op::number:
        return std::pair{0.0, node.value};
      case Op::variable:
        return std::pair{1.0, 0.0};
      case Op::negate: {
        Affine a = affine_of(*node.args[0]);
        if (!a) return std::nullopt;
        return std::pair{-a->first, -a->second};
      }
      case Op::add:
      case Op::sub: {
        Affine a = affine_of(*node.args[0]);
        Affine b = affine_of(*node.args[1]);
        if (!a || !b) return std::nullopt;
        const double sign = node.op == Op::add ? 1.0 : -1.0;
        return std::pair{a->first + sign * b->first, a->second + sign * b->second};
      }
      case Op::mul: {
        Affine a = affine_of(*node.args[0]);
        Affine b = affine_of(*node.args[1]);
        if (!a || !b) return std::nullopt;
        if (a->first == 0.0) return std::pair{a->second * b->first, a->second * b->second};
        if (b->first == 0.0) return std::pair{b->second * a->first, b->second * a->second};
        return std::nullopt;
      }
      case Op::div: {
        Affine a = affine_of(*node.args[0]);
        if (!a || !node.args[1]->constant) return std::nullopt;
        const double c = node.args[1]->value;
        return std::pair{a->first / c, a->second / c};
      }
      default:
        return std::nullopt;
    }
  }
};

}  // namespace

Expression Expression::parse(const std::string& text, Variable variable) {
  return Expression(Parser(text, variable).run(), text, variable);
}

double Expression::evaluate(double value) const { return eval(*root_, value); }

bool Expression::is_constant() const { return root_->constant; }

TailModel Expression::tail() const {
  if (variable_ != Variable::index) return UnknownTail{};
  return root_->tail;
}

std::optional<std::pair<double, double>> Expression::affine_form() const { return Parser::affine_of(*root_); }

Sequence parse_sequence_spec(const std::string& text) {
  Expression expression = Expression::parse(text, Expression::Variable::index);
  return Sequence([expression](Index n) {
    try {
      return expression.evaluate(static_cast<double>(n));
    } catch (const DomainError& e) {
      if (e.index() != 0) throw;
      throw DomainError(e.what(), n);
    }
  }, expression.tail(), text);
}

FunctionSpec::FunctionSpec(Expression expression, std::optional<double> declared_bound)
    : expression_(std::move(expression)), declared_bound_(declared_bound) {
  if (declared_bound_ && !(*declared_bound_ > 0.0)) throw std::invalid_argument("declared bound must be positive");
}

FunctionSpec parse_function_spec(const std::string& text, std::optional<double> declared_bound) {
  return FunctionSpec(Expression::parse(text, Expression::Variable::argument), declared_bound);
}

}  // namespace asympair
