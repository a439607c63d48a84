#include <doctest.h>

#include "tfun/calculus.hpp"
#include "tfun/expr.hpp"

using namespace tfun;

namespace {
uint64_t ev(const char* text, uint64_t x, int width) {
  return TFunction(text, width)(Word(x, width)).value();
}
}  // namespace

TEST_CASE("literals, variables and basic arithmetic") {
  CHECK(ev("1+2*3", 0, 8) == 7);
  CHECK(ev("0x1F", 0, 8) == 31);
  CHECK(ev("x", 9, 4) == 9);
  CHECK(ev("x-5", 2, 4) == 13);
  CHECK(ev("-3", 0, 4) == 13);  // negative literal reduces into the ring
}

TEST_CASE("precedence and associativity") {
  CHECK(ev("3**3**2", 0, 16) == 19683);  // right-associative: 3**(3**2), not 729
  // the inner power is an expression, not a literal exponent, so the outer
  // power falls under the odd-base rule
  CHECK_THROWS_AS(ev("2**3**2", 0, 16), EvalError);
  CHECK(ev("-x**2", 3, 8) == 9);        // unary binds tighter: (-x)**2
  CHECK(ev("~x**2", 3, 8) == ((256 - 4) * (256 - 4)) % 256);
  CHECK(ev("1|2^3&4+5*6", 0, 8) == (1 | (2 ^ (3 & (4 + 5 * 6)))) % 256);
  CHECK(ev("x-2-1", 8, 8) == 5);        // subtraction is left-associative
}

TEST_CASE("division multiplies by the inverse of an odd divisor") {
  CHECK(ev("1/3", 0, 4) == 11);
  CHECK(ev("6/3", 0, 8) == 2);
  CHECK(ev("-1/3", 0, 4) == 5);
  try {
    ev("x/2", 1, 8);
    FAIL("even divisor must throw");
  } catch (const EvalError& e) {
    CHECK(e.kind == EvalError::Kind::EvenDivisor);
    CHECK(e.pos == 1);
    CHECK(e.input == 1);
  }
}

TEST_CASE("word-valued exponents require an odd base") {
  CHECK(ev("3**x", 2, 4) == 9);
  CHECK(ev("x**-1", 3, 4) == 11);  // negative literal exponent inverts
  try {
    ev("2**x", 1, 8);
    FAIL("even base with word exponent must throw");
  } catch (const EvalError& e) {
    CHECK(e.kind == EvalError::Kind::EvenBaseVarExponent);
    CHECK(e.pos == 1);
  }
  CHECK_THROWS_AS(ev("x**-1", 2, 4), EvalError);  // inverse of an even word
}

TEST_CASE("parse errors carry the byte offset") {
  auto offset_of = [](const char* text) {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.offset;
    }
    return -1;
  };
  CHECK(offset_of("x+") == 2);
  CHECK(offset_of("(x") == 2);
  CHECK(offset_of("x$") == 1);
  CHECK(offset_of("3 @ 4") == 2);
  CHECK(offset_of("") == 0);
}

TEST_CASE("to_text is canonical and re-parses to an equal tree") {
  const char* samples[] = {
      "x+(x**2|5)",
      "-x**2",
      "2**3**2",
      "1+3*x+2*x**2",
      "~x&3",
      "x-(2-x)",
      "x/3 + (1/3)**x + 4*(1 - 2*~(x & x**2 + x**3 | x**4)/(3 - 4*(5 + 6*x**5)**"
      "(x**6 ^ x**7)))**(7 + (8*x**8)/(9 + 10*x**9))",
  };
  for (const char* s : samples) {
    ExprPtr e = parse(s);
    std::string text = to_text(*e);
    CHECK(expr_equal(*parse(text), *e));
  }
  CHECK(to_text(*parse("x+(x**2|5)")) == "x + (x**2 | 5)");
  CHECK(to_text(*parse("2**3**2")) == "2**3**2");
  CHECK(to_text(*parse("x-(2-x)")) == "x - (2 - x)");
}

TEST_CASE("substitute replaces the variable everywhere") {
  ExprPtr body = parse("x + x*2");
  ExprPtr replaced = substitute(body, parse("x+1"));
  CHECK(expr_equal(*replaced, *parse("(x+1) + (x+1)*2")));
  TFunction f(replaced, 8);
  CHECK(f(Word(3, 8)).value() == 4 + 8);
}

TEST_CASE("frozen evaluations of the suite update functions") {
  CHECK(ev("x+(x**2|5)", 0, 8) == 5);
  CHECK(ev("x+(x**2|5)", 5, 8) == 34);

  const char* monster =
      "x/3 + (1/3)**x + 4*(1 - 2*~(x & x**2 + x**3 | x**4)/(3 - 4*(5 + 6*x**5)**"
      "(x**6 ^ x**7)))**(7 + (8*x**8)/(9 + 10*x**9))";
  TFunction f(monster, 20);
  Word first = f(Word(1, 20));
  CHECK(first.value() == 768170);
  CHECK(f(first).value() == 472419);
}

TEST_CASE("iterate and iterate_visit agree and count evaluations") {
  TFunction f("x+(x**2|5)", 12);
  uint64_t before = eval_count();
  std::vector<Word> orbit = iterate(f, Word(1, 12), 20);
  CHECK(eval_count() - before == 20);
  REQUIRE(orbit.size() == 21);

  std::vector<Word> seen;
  iterate_visit(f, Word(1, 12), 20, [&](uint64_t i, const Word& x) {
    CHECK(i == seen.size());
    seen.push_back(x);
  });
  CHECK(seen == orbit);
}

TEST_CASE("make_transitive and make_bijective produce what they claim") {
  for (const char* g : {"x**3", "x&(x+7)", "5*x**2"}) {
    TFunction built = make_transitive(TFunction(g, 10));
    CHECK(is_transitive_bruteforce(built, 8));
    TFunction bij = make_bijective(TFunction(g, 10), 2);
    CHECK(is_bijective_bruteforce(bij, 8));
  }
}
