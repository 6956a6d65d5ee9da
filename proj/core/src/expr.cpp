#include "lipdisc/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "lipdisc/error.hpp"

namespace lipdisc {

struct Expression::Node {
  Kind kind = Kind::kConstant;
  double value = 0.0;
  Variable var;
  UnaryOp uop = UnaryOp::kNeg;
  BinaryOp bop = BinaryOp::kAdd;
  unsigned exponent = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

struct FunctionName {
  std::string_view name;
  UnaryOp op;
};

constexpr FunctionName kFunctions[] = {
    {"sin", UnaryOp::kSin},   {"cos", UnaryOp::kCos},   {"tan", UnaryOp::kTan},
    {"exp", UnaryOp::kExp},   {"ln", UnaryOp::kLn},     {"sqrt", UnaryOp::kSqrt},
    {"abs", UnaryOp::kAbs},   {"tanh", UnaryOp::kTanh}, {"sign", UnaryOp::kSign},
};

std::string_view function_name(UnaryOp op) {
  for (const auto& f : kFunctions) {
    if (f.op == op) return f.name;
  }
  return "neg";
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

}  // namespace

// ---------------------------------------------------------------------------
// Variable

std::optional<Variable> Variable::from_name(std::string_view name) {
  if (name.size() < 2) return std::nullopt;
  Kind kind;
  if (name[0] == 'x') {
    kind = Kind::kState;
  } else if (name[0] == 'u') {
    kind = Kind::kInput;
  } else {
    return std::nullopt;
  }
  std::string_view digits = name.substr(1);
  if (digits[0] == '0') return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || value <= 0) {
    return std::nullopt;
  }
  return Variable{kind, value - 1};
}

std::string Variable::name() const {
  return (kind == Kind::kState ? "x" : "u") + std::to_string(index + 1);
}

// ---------------------------------------------------------------------------
// Expression construction

Expression::Expression() : Expression(constant(0.0)) {}

Expression::Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expression Expression::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kConstant;
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::variable(Variable v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kVariable;
  n->var = v;
  return Expression(std::move(n));
}

Expression Expression::raw_unary(UnaryOp op, Expression operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kUnary;
  n->uop = op;
  n->lhs = std::move(operand.node_);
  return Expression(std::move(n));
}

Expression Expression::raw_binary(BinaryOp op, Expression lhs, Expression rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kBinary;
  n->bop = op;
  n->lhs = std::move(lhs.node_);
  n->rhs = std::move(rhs.node_);
  return Expression(std::move(n));
}

Expression Expression::raw_power(Expression base, unsigned exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kPower;
  n->exponent = exponent;
  n->lhs = std::move(base.node_);
  return Expression(std::move(n));
}

namespace {

double apply_unary(UnaryOp op, double a) {
  switch (op) {
    case UnaryOp::kNeg: return -a;
    case UnaryOp::kSin: return std::sin(a);
    case UnaryOp::kCos: return std::cos(a);
    case UnaryOp::kTan: return std::tan(a);
    case UnaryOp::kExp: return std::exp(a);
    case UnaryOp::kLn: return std::log(a);
    case UnaryOp::kSqrt: return std::sqrt(a);
    case UnaryOp::kAbs: return std::fabs(a);
    case UnaryOp::kTanh: return std::tanh(a);
    case UnaryOp::kSign: return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
  }
  return a;
}

double apply_binary(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::kAdd: return a + b;
    case BinaryOp::kSub: return a - b;
    case BinaryOp::kMul: return a * b;
    case BinaryOp::kDiv: return a / b;
  }
  return a;
}

double int_pow(double base, unsigned exponent) {
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1u) result *= base;
    base *= base;
    exponent >>= 1u;
  }
  return result;
}

}  // namespace

Expression Expression::unary(UnaryOp op, Expression operand) {
  if (operand.kind() == Kind::kConstant) {
    const double folded = apply_unary(op, operand.value());
    if (std::isfinite(folded)) return constant(folded);
  }
  if (op == UnaryOp::kNeg && operand.kind() == Kind::kUnary &&
      operand.unary_op() == UnaryOp::kNeg) {
    return operand.lhs();
  }
  return raw_unary(op, std::move(operand));
}

Expression Expression::binary(BinaryOp op, Expression lhs, Expression rhs) {
  const bool lc = lhs.kind() == Kind::kConstant;
  const bool rc = rhs.kind() == Kind::kConstant;
  if (lc && rc) {
    const double folded = apply_binary(op, lhs.value(), rhs.value());
    if (std::isfinite(folded)) return constant(folded);
  }
  switch (op) {
    case BinaryOp::kAdd:
      if (lhs.is_constant(0.0)) return rhs;
      if (rhs.is_constant(0.0)) return lhs;
      break;
    case BinaryOp::kSub:
      if (rhs.is_constant(0.0)) return lhs;
      if (lhs.is_constant(0.0)) return unary(UnaryOp::kNeg, std::move(rhs));
      break;
    case BinaryOp::kMul:
      if (lhs.is_constant(0.0) || rhs.is_constant(0.0)) return constant(0.0);
      if (lhs.is_constant(1.0)) return rhs;
      if (rhs.is_constant(1.0)) return lhs;
      if (lhs.is_constant(-1.0)) return unary(UnaryOp::kNeg, std::move(rhs));
      if (rhs.is_constant(-1.0)) return unary(UnaryOp::kNeg, std::move(lhs));
      break;
    case BinaryOp::kDiv:
      if (rhs.is_constant(1.0)) return lhs;
      if (lhs.is_constant(0.0) && !rhs.is_constant(0.0)) return constant(0.0);
      break;
  }
  return raw_binary(op, std::move(lhs), std::move(rhs));
}

Expression Expression::power(Expression base, unsigned exponent) {
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  if (base.kind() == Kind::kConstant) {
    const double folded = int_pow(base.value(), exponent);
    if (std::isfinite(folded)) return constant(folded);
  }
  return raw_power(std::move(base), exponent);
}

Expression::Kind Expression::kind() const { return node_->kind; }
double Expression::value() const { return node_->value; }
Variable Expression::variable() const { return node_->var; }
UnaryOp Expression::unary_op() const { return node_->uop; }
BinaryOp Expression::binary_op() const { return node_->bop; }
unsigned Expression::exponent() const { return node_->exponent; }
Expression Expression::lhs() const { return Expression(node_->lhs); }
Expression Expression::rhs() const { return Expression(node_->rhs); }

bool Expression::is_constant(double v) const {
  return node_->kind == Kind::kConstant && node_->value == v;
}

namespace {

int max_index(const Expression::Node& n, Variable::Kind kind) {
  switch (n.kind) {
    case Expression::Kind::kConstant: return 0;
    case Expression::Kind::kVariable: return n.var.kind == kind ? n.var.index + 1 : 0;
    case Expression::Kind::kUnary:
    case Expression::Kind::kPower: return max_index(*n.lhs, kind);
    case Expression::Kind::kBinary:
      return std::max(max_index(*n.lhs, kind), max_index(*n.rhs, kind));
  }
  return 0;
}

bool equal_nodes(const Expression::Node& a, const Expression::Node& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expression::Kind::kConstant: return a.value == b.value;
    case Expression::Kind::kVariable: return a.var == b.var;
    case Expression::Kind::kUnary: return a.uop == b.uop && equal_nodes(*a.lhs, *b.lhs);
    case Expression::Kind::kPower:
      return a.exponent == b.exponent && equal_nodes(*a.lhs, *b.lhs);
    case Expression::Kind::kBinary:
      return a.bop == b.bop && equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
  }
  return false;
}

}  // namespace

int Expression::max_state_index() const { return max_index(*node_, Variable::Kind::kState); }
int Expression::max_input_index() const { return max_index(*node_, Variable::Kind::kInput); }

bool Expression::structurally_equal(const Expression& other) const {
  return equal_nodes(*node_, *other.node_);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression parse() {
    skip_space();
    if (pos_ >= text_.size()) fail_expected("expression");
    Expression e = parse_sum();
    skip_space();
    if (pos_ < text_.size()) fail_expected("operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, std::size_t offset, std::string expected,
                         const std::string& message) {
    throw ParseError(kind, offset, std::move(expected),
                     "syntax error at byte " + std::to_string(offset) + ": " + message);
  }

  [[noreturn]] void fail_expected(const std::string& expected) {
    std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'"
                                            : std::string("end of input");
    fail(ParseError::Kind::kSyntax, pos_, expected, "expected " + expected + ", found " + found);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression parse_sum() {
    Expression lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = Expression::raw_binary(BinaryOp::kAdd, std::move(lhs), parse_product());
      } else if (accept('-')) {
        lhs = Expression::raw_binary(BinaryOp::kSub, std::move(lhs), parse_product());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_product() {
    Expression lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expression::raw_binary(BinaryOp::kMul, std::move(lhs), parse_unary());
      } else if (accept('/')) {
        lhs = Expression::raw_binary(BinaryOp::kDiv, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_unary() {
    if (accept('+')) return parse_unary();
    if (accept('-')) {
      skip_space();
      if (pos_ < text_.size() && (is_digit(text_[pos_]) || text_[pos_] == '.')) {
        const std::size_t save = pos_;
        const double v = parse_number();
        if (!peek('^')) return Expression::constant(-v);
        pos_ = save;
      }
      return Expression::raw_unary(UnaryOp::kNeg, parse_unary());
    }
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    while (accept('^')) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      if (start == pos_ || (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' ||
                                                    text_[pos_] == 'E'))) {
        pos_ = start;
        fail(ParseError::Kind::kBadExponent, start, "nonnegative integer exponent",
             "exponent must be a nonnegative integer literal");
      }
      unsigned exponent = 0;
      auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, exponent);
      if (ec != std::errc() || exponent > 1000) {
        fail(ParseError::Kind::kBadExponent, start, "integer exponent <= 1000",
             "exponent out of range");
      }
      base = Expression::raw_power(std::move(base), exponent);
    }
    return base;
  }

  double parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && is_digit(text_[p])) {
        pos_ = p;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(value)) {
      pos_ = start;
      fail_expected("number");
    }
    return value;
  }

  Expression parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail_expected("operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = parse_sum();
      if (!accept(')')) fail_expected("')'");
      return inner;
    }
    if (is_digit(c) || c == '.') return Expression::constant(parse_number());
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      const std::string_view ident = text_.substr(start, pos_ - start);
      if (peek('(')) {
        for (const auto& f : kFunctions) {
          if (f.name == ident) {
            ++pos_;
            Expression arg = parse_sum();
            if (!accept(')')) fail_expected("')'");
            return Expression::raw_unary(f.op, std::move(arg));
          }
        }
        fail(ParseError::Kind::kUnknownFunction, start, "function name",
             "unknown function '" + std::string(ident) + "'");
      }
      if (ident == "pi") return Expression::constant(std::numbers::pi);
      if (auto v = Variable::from_name(ident)) return Expression::variable(*v);
      fail(ParseError::Kind::kUnknownVariable, start, "variable x<k> or u<k>",
           "unknown variable '" + std::string(ident) + "'");
    }
    fail_expected("operand");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Unparse

namespace {

// Binding strength used to decide where parentheses are needed.
int precedence(const Expression& e) {
  switch (e.kind()) {
    case Expression::Kind::kConstant: return 5;
    case Expression::Kind::kVariable: return 5;
    case Expression::Kind::kPower: return 4;
    case Expression::Kind::kUnary: return e.unary_op() == UnaryOp::kNeg ? 3 : 5;
    case Expression::Kind::kBinary:
      return (e.binary_op() == BinaryOp::kAdd || e.binary_op() == BinaryOp::kSub) ? 1 : 2;
  }
  return 0;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ptr);
  if (v < 0.0 || std::signbit(v)) return "(" + s + ")";
  return s;
}

void write(const Expression& e, std::string& out);

void write_wrapped(const Expression& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  write(e, out);
  if (wrap) out += ')';
}

void write(const Expression& e, std::string& out) {
  switch (e.kind()) {
    case Expression::Kind::kConstant:
      out += format_number(e.value());
      return;
    case Expression::Kind::kVariable:
      out += e.variable().name();
      return;
    case Expression::Kind::kUnary: {
      if (e.unary_op() == UnaryOp::kNeg) {
        const Expression operand = e.lhs();
        out += '-';
        write_wrapped(operand,
                      operand.kind() == Expression::Kind::kConstant || precedence(operand) < 3,
                      out);
      } else {
        out += function_name(e.unary_op());
        out += '(';
        write(e.lhs(), out);
        out += ')';
      }
      return;
    }
    case Expression::Kind::kPower:
      write_wrapped(e.lhs(), precedence(e.lhs()) < 4, out);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    case Expression::Kind::kBinary: {
      const int p = precedence(e);
      const char* op = " + ";
      switch (e.binary_op()) {
        case BinaryOp::kAdd: op = " + "; break;
        case BinaryOp::kSub: op = " - "; break;
        case BinaryOp::kMul: op = "*"; break;
        case BinaryOp::kDiv: op = "/"; break;
      }
      write_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
      out += op;
      write_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
      return;
    }
  }
}

}  // namespace

std::string unparse(const Expression& e) {
  std::string out;
  write(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const Expression& e, std::span<const double> x, std::span<const double> u) {
  switch (e.kind()) {
    case Expression::Kind::kConstant:
      return e.value();
    case Expression::Kind::kVariable: {
      const Variable v = e.variable();
      const auto values = v.kind == Variable::Kind::kState ? x : u;
      if (v.index < 0 || static_cast<std::size_t>(v.index) >= values.size()) {
        throw EvalError(v.name(), "variable index out of range (dimension " +
                                      std::to_string(values.size()) + ")");
      }
      return values[static_cast<std::size_t>(v.index)];
    }
    case Expression::Kind::kUnary: {
      const double a = evaluate(e.lhs(), x, u);
      if (e.unary_op() == UnaryOp::kLn && !(a > 0.0)) {
        throw EvalError(unparse(e), "ln of non-positive value");
      }
      if (e.unary_op() == UnaryOp::kSqrt && a < 0.0) {
        throw EvalError(unparse(e), "sqrt of negative value");
      }
      return apply_unary(e.unary_op(), a);
    }
    case Expression::Kind::kPower:
      return int_pow(evaluate(e.lhs(), x, u), e.exponent());
    case Expression::Kind::kBinary: {
      const double a = evaluate(e.lhs(), x, u);
      const double b = evaluate(e.rhs(), x, u);
      if (e.binary_op() == BinaryOp::kDiv && b == 0.0) {
        throw EvalError(unparse(e), "division by zero");
      }
      return apply_binary(e.binary_op(), a, b);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Differentiation

Expression differentiate(const Expression& e, Variable var) {
  using E = Expression;
  switch (e.kind()) {
    case E::Kind::kConstant:
      return E::constant(0.0);
    case E::Kind::kVariable:
      return E::constant(e.variable() == var ? 1.0 : 0.0);
    case E::Kind::kUnary: {
      const E a = e.lhs();
      const E da = differentiate(a, var);
      if (da.is_constant(0.0)) return E::constant(0.0);
      auto chain = [&](E outer) { return E::binary(BinaryOp::kMul, std::move(outer), da); };
      switch (e.unary_op()) {
        case UnaryOp::kNeg:
          return E::unary(UnaryOp::kNeg, da);
        case UnaryOp::kSin:
          return chain(E::unary(UnaryOp::kCos, a));
        case UnaryOp::kCos:
          return chain(E::unary(UnaryOp::kNeg, E::unary(UnaryOp::kSin, a)));
        case UnaryOp::kTan:
          return chain(E::binary(BinaryOp::kAdd, E::constant(1.0),
                                 E::power(E::unary(UnaryOp::kTan, a), 2)));
        case UnaryOp::kExp:
          return chain(E::unary(UnaryOp::kExp, a));
        case UnaryOp::kLn:
          return E::binary(BinaryOp::kDiv, da, a);
        case UnaryOp::kSqrt:
          return E::binary(BinaryOp::kDiv, da,
                           E::binary(BinaryOp::kMul, E::constant(2.0),
                                     E::unary(UnaryOp::kSqrt, a)));
        case UnaryOp::kAbs:
          return chain(E::unary(UnaryOp::kSign, a));
        case UnaryOp::kTanh:
          return chain(E::binary(BinaryOp::kSub, E::constant(1.0),
                                 E::power(E::unary(UnaryOp::kTanh, a), 2)));
        case UnaryOp::kSign:
          return E::constant(0.0);
      }
      return E::constant(0.0);
    }
    case E::Kind::kPower: {
      const unsigned k = e.exponent();
      if (k == 0) return E::constant(0.0);
      const E a = e.lhs();
      const E da = differentiate(a, var);
      return E::binary(BinaryOp::kMul,
                       E::binary(BinaryOp::kMul, E::constant(static_cast<double>(k)),
                                 E::power(a, k - 1)),
                       da);
    }
    case E::Kind::kBinary: {
      const E a = e.lhs();
      const E b = e.rhs();
      const E da = differentiate(a, var);
      const E db = differentiate(b, var);
      switch (e.binary_op()) {
        case BinaryOp::kAdd:
          return E::binary(BinaryOp::kAdd, da, db);
        case BinaryOp::kSub:
          return E::binary(BinaryOp::kSub, da, db);
        case BinaryOp::kMul:
          return E::binary(BinaryOp::kAdd, E::binary(BinaryOp::kMul, da, b),
                           E::binary(BinaryOp::kMul, a, db));
        case BinaryOp::kDiv:
          // (a'b - ab') / b^2
          return E::binary(BinaryOp::kDiv,
                           E::binary(BinaryOp::kSub, E::binary(BinaryOp::kMul, da, b),
                                     E::binary(BinaryOp::kMul, a, db)),
                           E::power(b, 2));
      }
    }
  }
  return E::constant(0.0);
}

}  // namespace lipdisc
