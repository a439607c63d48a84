#pragma once

// Expression language over one variable x, evaluated in Z/2^width.
//
// Grammar (lowest to highest precedence):
//   or    := xor ('|' xor)*
//   xor   := and ('^' and)*
//   and   := sum ('&' sum)*
//   sum   := prod (('+' | '-') prod)*
//   prod  := pow  (('*' | '/') pow)*
//   pow   := unary ('**' pow)?          -- right associative
//   unary := ('-' | '~') unary | atom
//   atom  := INT | 'x' | '(' or ')'
//   INT   := decimal or 0x-prefixed hex
//
// '^' is xor, '**' is power.  Division a/b multiplies by the inverse of an
// odd b.  Power with a literal integer exponent is exact square-and-multiply
// (negative literal exponents invert an odd base); power with any other
// exponent requires an odd base and follows pow_mod's reduction rule.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tfun/word.hpp"

namespace tfun {

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Pow, And, Or, Xor };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Var, Lit, Unary, Binary };
  Kind kind = Kind::Var;
  int64_t lit = 0;       // Kind::Lit — exact signed integer, width-independent
  UnaryOp un{};          // Kind::Unary
  BinaryOp bin{};        // Kind::Binary
  ExprPtr lhs, rhs;      // Unary uses lhs only
  int pos = -1;          // byte offset in source text, -1 when synthesized
};

ExprPtr make_var();
ExprPtr make_lit(int64_t v);
ExprPtr make_unary(UnaryOp op, ExprPtr child);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);

struct ParseError : Error {
  int offset;
  ParseError(const std::string& what, int offset_)
      : Error(what + " at offset " + std::to_string(offset_)), offset(offset_) {}
};

ExprPtr parse(std::string_view text);

// Canonical text with minimal parentheses; parse(to_text(e)) reproduces e.
std::string to_text(const Expr& e);

bool expr_equal(const Expr& a, const Expr& b);

// body with every occurrence of x replaced by `replacement`.
ExprPtr substitute(const ExprPtr& body, const ExprPtr& replacement);

struct EvalError : Error {
  enum class Kind { EvenDivisor, EvenBaseVarExponent };
  Kind kind;
  int pos;        // offending node's source offset (-1 for synthesized nodes)
  uint64_t input; // evaluation input x
  int64_t step;   // iteration step when raised from iterate, else -1
  EvalError(Kind kind_, int pos_, uint64_t input_);
};

// A map on words of a fixed width, given by an expression body.
struct TFunction {
  ExprPtr body;
  int width = 0;

  TFunction(ExprPtr body_, int width_);
  TFunction(std::string_view text, int width_);
  Word operator()(const Word& x) const;
};

Word eval(const TFunction& f, const Word& x);

// x_0 = x0, x_{i+1} = f(x_i); returns x_0 .. x_steps.
std::vector<Word> iterate(const TFunction& f, const Word& x0, uint64_t steps);

// Streaming variant, O(1) memory: calls visit(i, x_i) for i in [0, steps].
void iterate_visit(const TFunction& f, const Word& x0, uint64_t steps,
                   const std::function<void(uint64_t, const Word&)>& visit);

// 1 + x + 2*(g(x+1) - g(x)): transitive for every expression g.
TFunction make_transitive(const TFunction& g);

// c + x + 2*g(x): bijective for every expression g and constant c.
TFunction make_bijective(const TFunction& g, int64_t c);

// Process-wide count of TFunction evaluations (diagnostics; in particular it
// lets tests assert that sequence recovery performs no evaluations at all).
uint64_t eval_count();

}  // namespace tfun
