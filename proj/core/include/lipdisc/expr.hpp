#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace lipdisc {

// A state variable x<k> or an input variable u<k>. index is zero-based, so
// x1 has index 0.
struct Variable {
  enum class Kind { kState, kInput };

  Kind kind = Kind::kState;
  int index = 0;

  static Variable state(int zero_based) { return {Kind::kState, zero_based}; }
  static Variable input(int zero_based) { return {Kind::kInput, zero_based}; }

  // Accepts "x1", "u3", ... Returns nullopt for anything else.
  static std::optional<Variable> from_name(std::string_view name);
  std::string name() const;

  friend bool operator==(const Variable&, const Variable&) = default;
};

enum class UnaryOp { kNeg, kSin, kCos, kTan, kExp, kLn, kSqrt, kAbs, kTanh, kSign };
enum class BinaryOp { kAdd, kSub, kMul, kDiv };

// Immutable scalar expression tree. Copies share nodes; safe to evaluate
// from many threads at once.
//
// The named constructors without the raw_ prefix apply light
// simplification (constant folding, 0*e -> 0, 1*e -> e, e+0 -> e, ...).
// The raw_ variants build exactly the node asked for; the parser uses them
// so a parse reproduces the source structure.
class Expression {
 public:
  enum class Kind { kConstant, kVariable, kUnary, kBinary, kPower };

  Expression();  // constant 0

  static Expression constant(double value);
  static Expression variable(Variable v);
  static Expression unary(UnaryOp op, Expression operand);
  static Expression binary(BinaryOp op, Expression lhs, Expression rhs);
  static Expression power(Expression base, unsigned exponent);

  static Expression raw_unary(UnaryOp op, Expression operand);
  static Expression raw_binary(BinaryOp op, Expression lhs, Expression rhs);
  static Expression raw_power(Expression base, unsigned exponent);

  Kind kind() const;
  // Valid for kConstant.
  double value() const;
  // Valid for kVariable.
  Variable variable() const;
  // Valid for kUnary.
  UnaryOp unary_op() const;
  // Valid for kBinary.
  BinaryOp binary_op() const;
  // Valid for kPower.
  unsigned exponent() const;
  // Operand of a unary/power node, or the left side of a binary node.
  Expression lhs() const;
  // Right side of a binary node.
  Expression rhs() const;

  bool is_constant(double v) const;

  // Largest 1-based state/input index referenced (0 when none).
  int max_state_index() const;
  int max_input_index() const;

  // Structural equality (same tree shape, same constants bitwise-equal
  // up to +0/-0).
  bool structurally_equal(const Expression& other) const;

  struct Node;

 private:
  explicit Expression(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// Grammar, loosest to tightest binding:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := primary ('^' UINT)*
//   primary := NUMBER | 'pi' | VAR | FUNC '(' sum ')' | '(' sum ')'
// A '-' directly in front of a numeric literal (not followed by '^') folds
// into a negative constant.
// Throws ParseError.
Expression parse_expression(std::string_view text);

// Text that parse_expression() maps back to a structurally identical tree.
std::string unparse(const Expression& e);

// Throws EvalError on domain errors or out-of-range variables.
double evaluate(const Expression& e, std::span<const double> x,
                std::span<const double> u = {});

// Exact symbolic derivative with light simplification. d|a|/da is
// sign(a), with sign(0) = 0.
Expression differentiate(const Expression& e, Variable var);

}  // namespace lipdisc
