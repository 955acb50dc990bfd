#include "sepalg/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace sepalg {

Expr Expr::constant(Complex value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name, int slot) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->name = std::move(name);
  n->slot = slot;
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(arg);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("negative exponent");
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->a = std::move(base);
  n->exponent = exponent;
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
Complex Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
int Expr::slot() const { return node_->slot; }
int Expr::exponent() const { return node_->exponent; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

bool operator==(const Expr& x, const Expr& y) {
  if (x.node_ == y.node_) return true;
  if (!x.node_ || !y.node_) return false;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Const: return a.value == b.value;
    case Op::Var: return a.name == b.name;
    case Op::Pow: return a.exponent == b.exponent && a.a == b.a;
    case Op::Neg:
    case Op::Sqrt:
    case Op::Exp: return a.a == b.a;
    default: return a.a == b.a && a.b == b.b;
  }
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  Expr run() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = Expr::binary(Op::Add, e, term());
      else if (accept('-')) e = Expr::binary(Op::Sub, e, term());
      else return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = Expr::binary(Op::Mul, e, unary());
      else if (accept('/')) e = Expr::binary(Op::Div, e, unary());
      else return e;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(Op::Neg, unary());
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t at = pos_;
    if (at < src_.size() && src_[at] == '-') fail("negative exponent");
    std::size_t end = at;
    while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    if (end == at) fail("exponent must be a non-negative integer literal");
    if (end < src_.size() && (src_[end] == '.' || src_[end] == 'e' || src_[end] == 'E'))
      fail("non-integer exponent");
    int k = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + at, src_.data() + end, k);
    if (ec != std::errc{}) fail("exponent out of range");
    pos_ = end;
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '^') fail("'^' is non-associative; use parentheses");
    return Expr::power(base, k);
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
      const std::string name(src_.substr(start, pos_ - start));
      if (name == "sqrt" || name == "exp") {
        skip_ws();
        if (pos_ >= src_.size() || src_[pos_] != '(') fail("expected '(' after " + name);
        ++pos_;
        Expr arg = expr();
        expect(')');
        return Expr::unary(name == "sqrt" ? Op::Sqrt : Op::Exp, arg);
      }
      if (name == "i") return Expr::constant({0.0, 1.0});
      for (std::size_t k = 0; k < vars_.size(); ++k)
        if (vars_[k] == name) return Expr::variable(name, static_cast<int>(k));
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc{} || ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < src_.size() && src_[pos_] == 'i' && (pos_ + 1 >= src_.size() || !is_ident_char(src_[pos_ + 1]))) {
      ++pos_;
      return Expr::constant({0.0, v});
    }
    if (pos_ < src_.size() && is_ident_char(src_[pos_])) fail("implicit multiplication is not allowed");
    return Expr::constant({v, 0.0});
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

template <typename Lookup>
Complex eval_node(const Expr& e, const Lookup& lookup) {
  switch (e.op()) {
    case Op::Const: return e.value();
    case Op::Var: return lookup(e);
    case Op::Neg: return -eval_node(e.lhs(), lookup);
    case Op::Add: return eval_node(e.lhs(), lookup) + eval_node(e.rhs(), lookup);
    case Op::Sub: return eval_node(e.lhs(), lookup) - eval_node(e.rhs(), lookup);
    case Op::Mul: return eval_node(e.lhs(), lookup) * eval_node(e.rhs(), lookup);
    case Op::Div: {
      const Complex num = eval_node(e.lhs(), lookup);
      const Complex den = eval_node(e.rhs(), lookup);
      if (den == Complex{}) throw EvalError("division by zero in '" + render(e) + "'");
      return num / den;
    }
    case Op::Pow: {
      const Complex base = eval_node(e.lhs(), lookup);
      Complex acc{1.0, 0.0};
      for (int k = 0; k < e.exponent(); ++k) acc *= base;
      return acc;
    }
    case Op::Sqrt: return principal_sqrt(eval_node(e.lhs(), lookup));
    case Op::Exp: return std::exp(eval_node(e.lhs(), lookup));
  }
  throw EvalError("corrupt expression node");
}

void collect(const Expr& e, std::set<std::string>& out) {
  switch (e.op()) {
    case Op::Const: return;
    case Op::Var: out.insert(e.name()); return;
    case Op::Neg:
    case Op::Pow:
    case Op::Sqrt:
    case Op::Exp: collect(e.lhs(), out); return;
    default:
      collect(e.lhs(), out);
      collect(e.rhs(), out);
  }
}

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Expr parse(std::string_view source, const std::vector<std::string>& allowed_vars) {
  return Parser(source, allowed_vars).run();
}

Complex evaluate(const Expr& e, std::span<const Complex> values) {
  return eval_node(e, [&](const Expr& v) -> Complex {
    if (v.slot() < 0 || static_cast<std::size_t>(v.slot()) >= values.size())
      throw EvalError("unbound variable '" + v.name() + "'");
    return values[static_cast<std::size_t>(v.slot())];
  });
}

Complex evaluate(const Expr& e, const std::map<std::string, Complex>& bindings) {
  return eval_node(e, [&](const Expr& v) -> Complex {
    auto it = bindings.find(v.name());
    if (it == bindings.end()) throw EvalError("unbound variable '" + v.name() + "'");
    return it->second;
  });
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

std::string render(const Expr& e) {
  switch (e.op()) {
    case Op::Const: {
      const Complex v = e.value();
      if (v.imag() == 0.0) return "(" + format_real(v.real()) + ")";
      if (v.real() == 0.0) return "(" + format_real(v.imag()) + "i)";
      return "((" + format_real(v.real()) + ")+(" + format_real(v.imag()) + "i))";
    }
    case Op::Var: return e.name();
    case Op::Neg: return "(-" + render(e.lhs()) + ")";
    case Op::Add: return "(" + render(e.lhs()) + "+" + render(e.rhs()) + ")";
    case Op::Sub: return "(" + render(e.lhs()) + "-" + render(e.rhs()) + ")";
    case Op::Mul: return "(" + render(e.lhs()) + "*" + render(e.rhs()) + ")";
    case Op::Div: return "(" + render(e.lhs()) + "/" + render(e.rhs()) + ")";
    case Op::Pow: return "(" + render(e.lhs()) + "^" + std::to_string(e.exponent()) + ")";
    case Op::Sqrt: return "sqrt(" + render(e.lhs()) + ")";
    case Op::Exp: return "exp(" + render(e.lhs()) + ")";
  }
  return {};
}

Complex principal_sqrt(Complex w) {
  // std::sqrt honours the sign of a zero imaginary part; -4-0i would land on -2i.
  if (w.imag() == 0.0) w = {w.real(), 0.0};
  return std::sqrt(w);
}

}  // namespace sepalg
