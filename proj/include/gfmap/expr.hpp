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

#ifndef GFMAP_EXPR_HPP
#define GFMAP_EXPR_HPP

// Branch expressions in one variable `x`.
//
// Grammar (highest precedence first):
//   primary := number | x | pi | e | fn '(' expr ')' | '(' expr ')' | '|' expr '|'
//   unary   := ('-' | '+') unary | primary
//   power   := unary ('^' power)?          right-assoc, exponent must be constant
//   term    := power (('*' | '/') power)*
//   expr    := term (('+' | '-') term)*
// fn is one of sin, cos, exp, log. A unary minus applied to a numeric literal
// is folded into a negative constant.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace gfmap {

enum class Op : std::uint8_t {
  Const,
  Var,
  Neg,
  Abs,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sin,
  Cos,
  Exp,
  Log,
};

// Immutable expression tree with value semantics (nodes are shared).
class Expr {
 public:
  struct Node;

  Expr();  // the constant 0

  static Expr constant(double value, long offset = -1);
  static Expr variable(long offset = -1);
  // Builders apply light normalization (constant folding, 0/1 identities)
  // so that derivatives print compactly.
  static Expr neg(const Expr& a, long offset = -1);
  static Expr abs(const Expr& a, long offset = -1);
  static Expr add(const Expr& a, const Expr& b, long offset = -1);
  static Expr sub(const Expr& a, const Expr& b, long offset = -1);
  static Expr mul(const Expr& a, const Expr& b, long offset = -1);
  static Expr div(const Expr& a, const Expr& b, long offset = -1);
  static Expr pow(const Expr& base, double exponent, long offset = -1);
  static Expr call(Op fn, const Expr& a, long offset = -1);
  // Verbatim node, no normalization. For Const and Pow, `value` is the
  // constant or the exponent.
  static Expr node(Op op, std::vector<Expr> args, double value = 0.0, long offset = -1);

  Op op() const;
  double value() const;     // Const only
  double exponent() const;  // Pow only
  std::size_t arity() const;
  const Expr& arg(std::size_t i) const;
  long offset() const;

  bool is_constant(double v) const;
  bool depends_on_x() const;

  // Structural equality; constants compare bitwise.
  bool operator==(const Expr& other) const;

  // Tree-walking evaluation; throws EvalError with the offending node offset.
  double eval(double x) const;

  std::string to_string() const;

  // Arguments of every |.| node, outermost first.
  std::vector<Expr> abs_arguments() const;

  std::size_t node_count() const;

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr parse(std::string_view source);

// Symbolic derivative of the given order (1..3).
Expr differentiate(const Expr& e, int order = 1);

// As above, but rejects expressions containing |u| where u changes sign or
// vanishes in the open interval (left, right).
Expr differentiate_on(const Expr& e, int order, double left, double right);

// Flattened postfix program for fast repeated evaluation.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);

  double operator()(double x) const;
  bool empty() const { return code_.empty(); }

 private:
  struct Instr {
    Op op;
    double value;  // constant or exponent
    long offset;
  };
  std::vector<Instr> code_;
  Expr fallback_;
  bool use_fallback_ = false;
};

}  // namespace gfmap

#endif  // GFMAP_EXPR_HPP
