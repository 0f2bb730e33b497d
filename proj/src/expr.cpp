/*
  Copyright 2026 The gfmap Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#include "gfmap/expr.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <charconv>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gfmap/errors.hpp"

namespace gfmap {

ParseError::ParseError(std::size_t offset, std::string expected, std::string found)
    : Error("parse error at offset " + std::to_string(offset) + ": expected " + expected +
            ", found '" + found + "'"),
      offset_(offset),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

EvalError::EvalError(const std::string& what, long offset)
    : Error(offset >= 0 ? what + " (at offset " + std::to_string(offset) + ")" : what),
      offset_(offset) {}

struct Expr::Node {
  Op op;
  double value = 0.0;  // Const value or Pow exponent
  long offset = -1;
  std::vector<Expr> args;
};

namespace {

[[maybe_unused]] bool is_function(Op op) {
  return op == Op::Sin || op == Op::Cos || op == Op::Exp || op == Op::Log;
}

const char* function_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    default: return "?";
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  assert(ec == std::errc());
  return std::string(buf.data(), end);
}

double checked_unary(Op op, double a, double exponent, long offset) {
  double r = 0.0;
  switch (op) {
    case Op::Neg: r = -a; break;
    case Op::Abs: r = std::fabs(a); break;
    case Op::Sin: r = std::sin(a); break;
    case Op::Cos: r = std::cos(a); break;
    case Op::Exp: r = std::exp(a); break;
    case Op::Log:
      if (!(a > 0.0)) throw EvalError("log of nonpositive value", offset);
      r = std::log(a);
      break;
    case Op::Pow:
      if (a == 0.0 && exponent < 0.0) throw EvalError("zero raised to negative power", offset);
      if (a < 0.0 && exponent != std::floor(exponent))
        throw EvalError("negative base with non-integer exponent", offset);
      r = std::pow(a, exponent);
      break;
    default: assert(false);
  }
  if (!std::isfinite(r)) throw EvalError("non-finite result", offset);
  return r;
}

double checked_binary(Op op, double a, double b, long offset) {
  double r = 0.0;
  switch (op) {
    case Op::Add: r = a + b; break;
    case Op::Sub: r = a - b; break;
    case Op::Mul: r = a * b; break;
    case Op::Div:
      if (b == 0.0) throw EvalError("division by zero", offset);
      r = a / b;
      break;
    default: assert(false);
  }
  if (!std::isfinite(r)) throw EvalError("non-finite result", offset);
  return r;
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value, long offset) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = value;
  n->offset = offset;
  return Expr(std::move(n));
}

Expr Expr::variable(long offset) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->offset = offset;
  return Expr(std::move(n));
}

namespace {

std::shared_ptr<Expr::Node> make_node(Op op, long offset) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->offset = offset;
  return n;
}

}  // namespace

Expr Expr::neg(const Expr& a, long offset) {
  if (a.op() == Op::Const) return constant(-a.value(), offset);
  if (a.op() == Op::Neg) return a.arg(0);
  if (a.op() == Op::Mul && a.arg(0).op() == Op::Const)
    return mul(constant(-a.arg(0).value()), a.arg(1), offset);
  auto n = make_node(Op::Neg, offset);
  n->args = {a};
  return Expr(std::move(n));
}

Expr Expr::abs(const Expr& a, long offset) {
  if (a.op() == Op::Const) return constant(std::fabs(a.value()), offset);
  auto n = make_node(Op::Abs, offset);
  n->args = {a};
  return Expr(std::move(n));
}

Expr Expr::add(const Expr& a, const Expr& b, long offset) {
  if (a.op() == Op::Const && b.op() == Op::Const) return constant(a.value() + b.value(), offset);
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  auto n = make_node(Op::Add, offset);
  n->args = {a, b};
  return Expr(std::move(n));
}

Expr Expr::sub(const Expr& a, const Expr& b, long offset) {
  if (a.op() == Op::Const && b.op() == Op::Const) return constant(a.value() - b.value(), offset);
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return neg(b, offset);
  auto n = make_node(Op::Sub, offset);
  n->args = {a, b};
  return Expr(std::move(n));
}

Expr Expr::mul(const Expr& a, const Expr& b, long offset) {
  if (a.op() == Op::Const && b.op() == Op::Const) return constant(a.value() * b.value(), offset);
  if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0, offset);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (b.op() == Op::Const) return mul(b, a, offset);
  if (a.op() == Op::Const) {
    if (b.op() == Op::Mul && b.arg(0).op() == Op::Const)
      return mul(constant(a.value() * b.arg(0).value()), b.arg(1), offset);
    if (b.op() == Op::Neg) return mul(constant(-a.value()), b.arg(0), offset);
    if (a.is_constant(-1.0)) return neg(b, offset);
  }
  auto n = make_node(Op::Mul, offset);
  n->args = {a, b};
  return Expr(std::move(n));
}

Expr Expr::div(const Expr& a, const Expr& b, long offset) {
  if (a.op() == Op::Const && b.op() == Op::Const && b.value() != 0.0)
    return constant(a.value() / b.value(), offset);
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return constant(0.0, offset);
  if (b.is_constant(1.0)) return a;
  auto n = make_node(Op::Div, offset);
  n->args = {a, b};
  return Expr(std::move(n));
}

Expr Expr::pow(const Expr& base, double exponent, long offset) {
  if (exponent == 0.0) return constant(1.0, offset);
  if (exponent == 1.0) return base;
  if (base.op() == Op::Const) {
    double v = std::pow(base.value(), exponent);
    if (std::isfinite(v)) return constant(v, offset);
  }
  auto n = make_node(Op::Pow, offset);
  n->args = {base};
  n->value = exponent;
  return Expr(std::move(n));
}

Expr Expr::call(Op fn, const Expr& a, long offset) {
  assert(is_function(fn));
  auto n = make_node(fn, offset);
  n->args = {a};
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
double Expr::exponent() const { return node_->value; }
std::size_t Expr::arity() const { return node_->args.size(); }
const Expr& Expr::arg(std::size_t i) const { return node_->args[i]; }
long Expr::offset() const { return node_->offset; }

bool Expr::is_constant(double v) const { return op() == Op::Const && value() == v; }

bool Expr::depends_on_x() const {
  if (op() == Op::Var) return true;
  for (std::size_t i = 0; i < arity(); ++i)
    if (arg(i).depends_on_x()) return true;
  return false;
}

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  if (op() != other.op() || arity() != other.arity()) return false;
  if ((op() == Op::Const || op() == Op::Pow) &&
      std::bit_cast<std::uint64_t>(value()) != std::bit_cast<std::uint64_t>(other.value()))
    return false;
  for (std::size_t i = 0; i < arity(); ++i)
    if (!(arg(i) == other.arg(i))) return false;
  return true;
}

double Expr::eval(double x) const {
  switch (op()) {
    case Op::Const: return value();
    case Op::Var: return x;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return checked_binary(op(), arg(0).eval(x), arg(1).eval(x), offset());
    default: return checked_unary(op(), arg(0).eval(x), value(), offset());
  }
}

std::vector<Expr> Expr::abs_arguments() const {
  std::vector<Expr> out;
  if (op() == Op::Abs) out.push_back(arg(0));
  for (std::size_t i = 0; i < arity(); ++i) {
    auto inner = arg(i).abs_arguments();
    out.insert(out.end(), inner.begin(), inner.end());
  }
  return out;
}

std::size_t Expr::node_count() const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity(); ++i) n += arg(i).node_count();
  return n;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// 1: + -   2: * /   3: ^   4: unary minus   5: atoms
int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Pow: return 3;
    case Op::Neg: return 4;
    case Op::Const: return std::signbit(e.value()) ? 4 : 5;
    default: return 5;
  }
}

std::string print(const Expr& e);

std::string wrap(const Expr& e, bool parens) {
  return parens ? "(" + print(e) + ")" : print(e);
}

std::string print(const Expr& e) {
  switch (e.op()) {
    case Op::Const: return format_number(e.value());
    case Op::Var: return "x";
    case Op::Neg: return "-" + wrap(e.arg(0), precedence(e.arg(0)) < 4);
    case Op::Abs: return "|" + print(e.arg(0)) + "|";
    case Op::Pow:
      return wrap(e.arg(0), precedence(e.arg(0)) <= 3) + "^" + format_number(e.exponent());
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log: return std::string(function_name(e.op())) + "(" + print(e.arg(0)) + ")";
    default: break;
  }
  const int p = precedence(e);
  const char* sym = e.op() == Op::Add ? "+" : e.op() == Op::Sub ? "-" : e.op() == Op::Mul ? "*" : "/";
  return wrap(e.arg(0), precedence(e.arg(0)) < p) + sym + wrap(e.arg(1), precedence(e.arg(1)) <= p);
}

}  // namespace

std::string Expr::to_string() const { return print(*this); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("end of input");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  [[noreturn]] void fail(const std::string& expected) {
    std::size_t at = pos_;
    std::string found = at < src_.size() ? std::string(1, src_[at]) : std::string("<end>");
    if (!src_.empty() && at >= src_.size()) at = src_.size() - 1;
    throw ParseError(at, expected, found);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("'") + c + "'");
    ++pos_;
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      long at = static_cast<long>(pos_++);
      Expr rhs = term();
      lhs = raw_binary(c == '+' ? Op::Add : Op::Sub, lhs, rhs, at);
    }
  }

  Expr term() {
    Expr lhs = power();
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      long at = static_cast<long>(pos_++);
      Expr rhs = power();
      lhs = raw_binary(c == '*' ? Op::Mul : Op::Div, lhs, rhs, at);
    }
  }

  Expr power() {
    Expr base = unary();
    if (peek() != '^') return base;
    long at = static_cast<long>(pos_++);
    std::size_t exp_start = pos_;
    Expr ex = power();
    if (ex.depends_on_x()) {
      pos_ = exp_start;
      skip_ws();
      fail("constant exponent");
    }
    double p;
    try {
      p = ex.eval(0.0);
    } catch (const EvalError&) {
      pos_ = exp_start;
      skip_ws();
      fail("finite exponent");
    }
    return raw_pow(base, p, at);
  }

  Expr unary() {
    char c = peek();
    if (c == '-') {
      long at = static_cast<long>(pos_++);
      Expr a = unary();
      if (a.op() == Op::Const) return Expr::constant(-a.value(), at);
      return raw_unary(Op::Neg, a, at);
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return primary();
  }

  Expr primary() {
    char c = peek();
    long at = static_cast<long>(pos_);
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (c == '|') {
      ++pos_;
      Expr e = expr();
      expect('|');
      return raw_unary(Op::Abs, e, at);
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      std::string_view id = src_.substr(start, pos_ - start);
      if (id == "x") return Expr::variable(at);
      if (id == "pi") return Expr::constant(std::numbers::pi, at);
      if (id == "e") return Expr::constant(std::numbers::e, at);
      Op fn;
      if (id == "sin") fn = Op::Sin;
      else if (id == "cos") fn = Op::Cos;
      else if (id == "exp") fn = Op::Exp;
      else if (id == "log") fn = Op::Log;
      else {
        pos_ = start;
        throw ParseError(start, "x, pi, e or a function name", std::string(id));
      }
      expect('(');
      Expr a = expr();
      expect(')');
      return raw_unary(fn, a, at);
    }
    fail("operand");
  }

  Expr number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail("digits");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // the keyword e, not an exponent
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      fail("finite number");
    }
    return Expr::constant(v, static_cast<long>(start));
  }

  // The parser builds trees verbatim (no normalization) so that printing and
  // re-parsing is structurally faithful.
  static Expr raw_binary(Op op, const Expr& a, const Expr& b, long at) {
    return Expr::node(op, {a, b}, 0.0, at);
  }
  static Expr raw_unary(Op op, const Expr& a, long at) { return Expr::node(op, {a}, 0.0, at); }
  static Expr raw_pow(const Expr& a, double p, long at) { return Expr::node(Op::Pow, {a}, p, at); }
};

}  // namespace

Expr Expr::node(Op op, std::vector<Expr> args, double value, long offset) {
  auto n = make_node(op, offset);
  n->value = value;
  assert(args.size() <= 2);
  n->args = std::move(args);
  return Expr(std::move(n));
}

Expr parse(std::string_view source) { return Parser(source).run(); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr derive(const Expr& e) {
  const long at = e.offset();
  if (!e.depends_on_x()) return Expr::constant(0.0, at);
  switch (e.op()) {
    case Op::Const: return Expr::constant(0.0, at);
    case Op::Var: return Expr::constant(1.0, at);
    case Op::Neg: return Expr::neg(derive(e.arg(0)), at);
    case Op::Abs: {
      // d|u| = u/|u| * u'
      const Expr& u = e.arg(0);
      return Expr::mul(Expr::div(u, Expr::abs(u, at), at), derive(u), at);
    }
    case Op::Add: return Expr::add(derive(e.arg(0)), derive(e.arg(1)), at);
    case Op::Sub: return Expr::sub(derive(e.arg(0)), derive(e.arg(1)), at);
    case Op::Mul: {
      const Expr& u = e.arg(0);
      const Expr& v = e.arg(1);
      if (!u.depends_on_x()) return Expr::mul(u, derive(v), at);
      if (!v.depends_on_x()) return Expr::mul(derive(u), v, at);
      return Expr::add(Expr::mul(derive(u), v, at), Expr::mul(u, derive(v), at), at);
    }
    case Op::Div: {
      const Expr& u = e.arg(0);
      const Expr& v = e.arg(1);
      if (!v.depends_on_x()) return Expr::div(derive(u), v, at);
      Expr num = Expr::sub(Expr::mul(derive(u), v, at), Expr::mul(u, derive(v), at), at);
      return Expr::div(num, Expr::pow(v, 2.0, at), at);
    }
    case Op::Pow: {
      const Expr& u = e.arg(0);
      const double p = e.exponent();
      Expr outer = Expr::mul(Expr::constant(p), Expr::pow(u, p - 1.0, at), at);
      return Expr::mul(outer, derive(u), at);
    }
    case Op::Sin: return Expr::mul(Expr::call(Op::Cos, e.arg(0), at), derive(e.arg(0)), at);
    case Op::Cos:
      return Expr::mul(Expr::neg(Expr::call(Op::Sin, e.arg(0), at), at), derive(e.arg(0)), at);
    case Op::Exp: return Expr::mul(e, derive(e.arg(0)), at);
    case Op::Log: return Expr::div(derive(e.arg(0)), e.arg(0), at);
  }
  return Expr::constant(0.0);
}

}  // namespace

Expr differentiate(const Expr& e, int order) {
  if (order < 1 || order > 3)
    throw std::invalid_argument("derivative order must be in 1..3, got " + std::to_string(order));
  Expr d = e;
  for (int k = 0; k < order; ++k) d = derive(d);
  return d;
}

Expr differentiate_on(const Expr& e, int order, double left, double right) {
  constexpr int kSamples = 1000;
  for (const Expr& u : e.abs_arguments()) {
    int sign = 0;
    for (int i = 0; i < kSamples; ++i) {
      const double t = left + (right - left) * (i + 0.5) / kSamples;
      const double v = u.eval(t);
      const int s = v > 0.0 ? 1 : v < 0.0 ? -1 : 0;
      if (s == 0 || (sign != 0 && s != sign))
        throw EvalError("|" + u.to_string() + "| is not smooth inside (" + format_number(left) +
                            ", " + format_number(right) + ")",
                        u.offset());
      sign = s;
    }
  }
  return differentiate(e, order);
}

// ---------------------------------------------------------------------------
// Compiled evaluation

namespace {

constexpr std::size_t kMaxStack = 64;

void emit(const Expr& e, std::vector<std::pair<Op, std::pair<double, long>>>& out, std::size_t depth,
          std::size_t& max_depth) {
  max_depth = std::max(max_depth, depth + 1);
  for (std::size_t i = 0; i < e.arity(); ++i) emit(e.arg(i), out, depth + i, max_depth);
  out.push_back({e.op(), {e.op() == Op::Const || e.op() == Op::Pow ? e.value() : 0.0, e.offset()}});
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e) : fallback_(e) {
  std::vector<std::pair<Op, std::pair<double, long>>> flat;
  std::size_t max_depth = 0;
  emit(e, flat, 0, max_depth);
  if (max_depth > kMaxStack) {
    use_fallback_ = true;
    return;
  }
  code_.reserve(flat.size());
  for (const auto& [op, rest] : flat) code_.push_back({op, rest.first, rest.second});
}

double CompiledExpr::operator()(double x) const {
  if (use_fallback_) return fallback_.eval(x);
  std::array<double, kMaxStack> stack;
  std::size_t sp = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Const: stack[sp++] = in.value; break;
      case Op::Var: stack[sp++] = x; break;
      case Op::Add: --sp; stack[sp - 1] += stack[sp]; break;
      case Op::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
      case Op::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
      case Op::Div:
        --sp;
        if (stack[sp] == 0.0) throw EvalError("division by zero", in.offset);
        stack[sp - 1] /= stack[sp];
        break;
      case Op::Pow:
        if (in.value == 2.0) {
          stack[sp - 1] *= stack[sp - 1];
        } else {
          stack[sp - 1] = checked_unary(Op::Pow, stack[sp - 1], in.value, in.offset);
        }
        break;
      default: stack[sp - 1] = checked_unary(in.op, stack[sp - 1], 0.0, in.offset); break;
    }
  }
  const double r = stack[0];
  if (!std::isfinite(r)) throw EvalError("non-finite result", -1);
  return r;
}

}  // namespace gfmap
