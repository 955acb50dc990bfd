#pragma once

// Holomorphic scalar expressions over named complex variables.
//
// Grammar (whitespace insensitive):
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' uint)?
//   atom   := number | number 'i' | 'i' | name | '(' expr ')'
//           | 'sqrt' '(' expr ')' | 'exp' '(' expr ')'
//
// '^' binds tighter than unary minus and does not chain: "a^2^3" is
// rejected, write "(a^2)^3". There is no implicit multiplication.

#include "sepalg/types.hpp"

#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sepalg {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sqrt, Exp };

/// Immutable expression tree. Copies share nodes.
class Expr {
 public:
  struct Node;

  Expr() = default;

  static Expr constant(Complex value);
  static Expr variable(std::string name, int slot);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr power(Expr base, int exponent);

  bool empty() const { return node_ == nullptr; }
  Op op() const;
  Complex value() const;           // Const
  const std::string& name() const;  // Var
  int slot() const;                // Var: index into the declared variable list
  int exponent() const;            // Pow
  const Expr& lhs() const;         // unary argument or left operand
  const Expr& rhs() const;

  /// Structural equality (constants compared exactly).
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  Op op = Op::Const;
  Complex value{};
  std::string name;
  int slot = -1;
  int exponent = 0;
  Expr a, b;
};

Expr parse(std::string_view source, const std::vector<std::string>& allowed_vars);

/// Evaluate with values given positionally, in the order of the variable
/// list the expression was parsed against.
Complex evaluate(const Expr& e, std::span<const Complex> values);

/// Evaluate with values given by name.
Complex evaluate(const Expr& e, const std::map<std::string, Complex>& bindings);

std::set<std::string> free_variables(const Expr& e);

/// Fully parenthesised text that parses back to a structurally equal tree.
std::string render(const Expr& e);

/// Principal square root: cut on the negative real axis, Re >= 0, and
/// negative reals map onto the positive imaginary axis.
Complex principal_sqrt(Complex w);

}  // namespace sepalg
