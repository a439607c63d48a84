#include "tfun/expr.hpp"

#include <atomic>
#include <cctype>
#include <sstream>

namespace tfun {

ExprPtr make_var() {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  return e;
}

ExprPtr make_lit(int64_t v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Lit;
  e->lit = v;
  return e;
}

ExprPtr make_unary(UnaryOp op, ExprPtr child) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Unary;
  e->un = op;
  e->lhs = std::move(child);
  return e;
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Binary;
  e->bin = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

namespace {

struct Token {
  enum class Kind {
    Int, Var, Plus, Minus, Star, Slash, StarStar, Amp, Pipe, Caret, Tilde,
    LParen, RParen, End
  };
  Kind kind;
  int pos;
  int64_t value = 0;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    int pos = static_cast<int>(i);
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      uint64_t v = 0;
      if (c == '0' && i + 1 < s.size() && (s[i + 1] == 'x' || s[i + 1] == 'X')) {
        i += 2;
        size_t digits = 0;
        while (i < s.size() && std::isxdigit(static_cast<unsigned char>(s[i]))) {
          if (v >> 60) throw ParseError("integer literal out of range", pos);
          char d = s[i];
          uint64_t nib = d <= '9' ? static_cast<uint64_t>(d - '0')
                                  : static_cast<uint64_t>(std::tolower(d) - 'a' + 10);
          v = (v << 4) | nib;
          ++i;
          ++digits;
        }
        if (!digits) throw ParseError("hex literal needs digits", pos);
      } else {
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
          uint64_t d = static_cast<uint64_t>(s[i] - '0');
          if (v > (UINT64_MAX - d) / 10) throw ParseError("integer literal out of range", pos);
          v = v * 10 + d;
          ++i;
        }
      }
      if (v > static_cast<uint64_t>(INT64_MAX))
        throw ParseError("integer literal out of range", pos);
      out.push_back({Token::Kind::Int, pos, static_cast<int64_t>(v)});
      continue;
    }
    switch (c) {
      case 'x': out.push_back({Token::Kind::Var, pos}); ++i; break;
      case '+': out.push_back({Token::Kind::Plus, pos}); ++i; break;
      case '-': out.push_back({Token::Kind::Minus, pos}); ++i; break;
      case '*':
        if (i + 1 < s.size() && s[i + 1] == '*') {
          out.push_back({Token::Kind::StarStar, pos});
          i += 2;
        } else {
          out.push_back({Token::Kind::Star, pos});
          ++i;
        }
        break;
      case '/': out.push_back({Token::Kind::Slash, pos}); ++i; break;
      case '&': out.push_back({Token::Kind::Amp, pos}); ++i; break;
      case '|': out.push_back({Token::Kind::Pipe, pos}); ++i; break;
      case '^': out.push_back({Token::Kind::Caret, pos}); ++i; break;
      case '~': out.push_back({Token::Kind::Tilde, pos}); ++i; break;
      case '(': out.push_back({Token::Kind::LParen, pos}); ++i; break;
      case ')': out.push_back({Token::Kind::RParen, pos}); ++i; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  out.push_back({Token::Kind::End, static_cast<int>(s.size())});
  return out;
}

struct Parser {
  const std::vector<Token>& toks;
  size_t at = 0;

  const Token& peek() const { return toks[at]; }
  Token take() { return toks[at++]; }
  bool accept(Token::Kind k) {
    if (peek().kind == k) {
      ++at;
      return true;
    }
    return false;
  }

  ExprPtr with_pos(ExprPtr e, int pos) {
    const_cast<Expr*>(e.get())->pos = pos;
    return e;
  }

  ExprPtr parse_or() {
    ExprPtr e = parse_xor();
    while (peek().kind == Token::Kind::Pipe) {
      int pos = take().pos;
      e = with_pos(make_binary(BinaryOp::Or, e, parse_xor()), pos);
    }
    return e;
  }

  ExprPtr parse_xor() {
    ExprPtr e = parse_and();
    while (peek().kind == Token::Kind::Caret) {
      int pos = take().pos;
      e = with_pos(make_binary(BinaryOp::Xor, e, parse_and()), pos);
    }
    return e;
  }

  ExprPtr parse_and() {
    ExprPtr e = parse_sum();
    while (peek().kind == Token::Kind::Amp) {
      int pos = take().pos;
      e = with_pos(make_binary(BinaryOp::And, e, parse_sum()), pos);
    }
    return e;
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_prod();
    while (peek().kind == Token::Kind::Plus || peek().kind == Token::Kind::Minus) {
      Token t = take();
      BinaryOp op = t.kind == Token::Kind::Plus ? BinaryOp::Add : BinaryOp::Sub;
      e = with_pos(make_binary(op, e, parse_prod()), t.pos);
    }
    return e;
  }

  ExprPtr parse_prod() {
    ExprPtr e = parse_pow();
    while (peek().kind == Token::Kind::Star || peek().kind == Token::Kind::Slash) {
      Token t = take();
      BinaryOp op = t.kind == Token::Kind::Star ? BinaryOp::Mul : BinaryOp::Div;
      e = with_pos(make_binary(op, e, parse_pow()), t.pos);
    }
    return e;
  }

  ExprPtr parse_pow() {
    ExprPtr base = parse_unary();
    if (peek().kind == Token::Kind::StarStar) {
      int pos = take().pos;
      return with_pos(make_binary(BinaryOp::Pow, base, parse_pow()), pos);
    }
    return base;
  }

  ExprPtr parse_unary() {
    if (peek().kind == Token::Kind::Minus) {
      int pos = take().pos;
      return with_pos(make_unary(UnaryOp::Neg, parse_unary()), pos);
    }
    if (peek().kind == Token::Kind::Tilde) {
      int pos = take().pos;
      return with_pos(make_unary(UnaryOp::Not, parse_unary()), pos);
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    Token t = take();
    switch (t.kind) {
      case Token::Kind::Int: return with_pos(make_lit(t.value), t.pos);
      case Token::Kind::Var: return with_pos(make_var(), t.pos);
      case Token::Kind::LParen: {
        ExprPtr e = parse_or();
        if (!accept(Token::Kind::RParen)) throw ParseError("expected ')'", peek().pos);
        return e;
      }
      default:
        throw ParseError("expected a value", t.pos);
    }
  }
};

}  // namespace

ExprPtr parse(std::string_view text) {
  std::vector<Token> toks = lex(text);
  Parser p{toks};
  ExprPtr e = p.parse_or();
  if (p.peek().kind != Token::Kind::End) throw ParseError("trailing input", p.peek().pos);
  return e;
}

namespace {

// Precedence levels used by the printer; higher binds tighter.
int prec_of(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::Lit: return 8;
    case Expr::Kind::Unary: return 7;
    case Expr::Kind::Binary:
      switch (e.bin) {
        case BinaryOp::Or: return 1;
        case BinaryOp::Xor: return 2;
        case BinaryOp::And: return 3;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 4;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 5;
        case BinaryOp::Pow: return 6;
      }
  }
  return 8;
}

const char* op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return " + ";
    case BinaryOp::Sub: return " - ";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "**";
    case BinaryOp::And: return " & ";
    case BinaryOp::Or: return " | ";
    case BinaryOp::Xor: return " ^ ";
  }
  return "?";
}

void print_node(std::ostringstream& os, const Expr& e, int min_prec) {
  int p = prec_of(e);
  bool paren = p < min_prec;
  if (paren) os << "(";
  switch (e.kind) {
    case Expr::Kind::Var: os << "x"; break;
    case Expr::Kind::Lit:
      if (e.lit < 0) {
        // negative literals only arise in synthesized trees; print so the
        // result re-lexes as unary minus applied to a literal
        os << "-" << static_cast<uint64_t>(-(e.lit + 1)) + 1;
      } else {
        os << e.lit;
      }
      break;
    case Expr::Kind::Unary:
      os << (e.un == UnaryOp::Neg ? "-" : "~");
      print_node(os, *e.lhs, 7);
      break;
    case Expr::Kind::Binary:
      if (e.bin == BinaryOp::Pow) {
        print_node(os, *e.lhs, p + 1);  // left operand of ** needs parens if ** itself
        os << op_text(e.bin);
        print_node(os, *e.rhs, p);      // right associative
      } else {
        print_node(os, *e.lhs, p);
        os << op_text(e.bin);
        print_node(os, *e.rhs, p + 1);  // left associative
      }
      break;
  }
  if (paren) os << ")";
}

}  // namespace

std::string to_text(const Expr& e) {
  std::ostringstream os;
  print_node(os, e, 0);
  return os.str();
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Var: return true;
    case Expr::Kind::Lit: return a.lit == b.lit;
    case Expr::Kind::Unary: return a.un == b.un && expr_equal(*a.lhs, *b.lhs);
    case Expr::Kind::Binary:
      return a.bin == b.bin && expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
  }
  return false;
}

ExprPtr substitute(const ExprPtr& body, const ExprPtr& replacement) {
  switch (body->kind) {
    case Expr::Kind::Var: return replacement;
    case Expr::Kind::Lit: return body;
    case Expr::Kind::Unary: {
      ExprPtr c = substitute(body->lhs, replacement);
      return c == body->lhs ? body : make_unary(body->un, c);
    }
    case Expr::Kind::Binary: {
      ExprPtr l = substitute(body->lhs, replacement);
      ExprPtr r = substitute(body->rhs, replacement);
      return (l == body->lhs && r == body->rhs) ? body : make_binary(body->bin, l, r);
    }
  }
  return body;
}

EvalError::EvalError(Kind kind_, int pos_, uint64_t input_)
    : Error(std::string(kind_ == Kind::EvenDivisor ? "even divisor" : "even base with word exponent") +
            " at offset " + std::to_string(pos_) + " for input " + std::to_string(input_)),
      kind(kind_), pos(pos_), input(input_), step(-1) {}

namespace {

std::atomic<uint64_t> g_eval_count{0};

// Folds Neg chains over a literal; identifies exponents that are exact integers.
std::optional<int64_t> literal_of(const Expr& e) {
  if (e.kind == Expr::Kind::Lit) return e.lit;
  if (e.kind == Expr::Kind::Unary && e.un == UnaryOp::Neg) {
    auto v = literal_of(*e.lhs);
    if (v && *v != INT64_MIN) return -*v;
  }
  return std::nullopt;
}

Word eval_node(const Expr& e, const Word& x, uint64_t input) {
  switch (e.kind) {
    case Expr::Kind::Var: return x;
    case Expr::Kind::Lit: return Word(static_cast<uint64_t>(e.lit), x.width());
    case Expr::Kind::Unary: {
      Word c = eval_node(*e.lhs, x, input);
      return e.un == UnaryOp::Neg ? Word(0, x.width()) - c : ~c;
    }
    case Expr::Kind::Binary: {
      if (e.bin == BinaryOp::Pow) {
        Word base = eval_node(*e.lhs, x, input);
        if (auto lit = literal_of(*e.rhs)) {
          if (*lit >= 0) return pow_uint(base, static_cast<uint64_t>(*lit));
          if ((base.value() & 1) == 0)
            throw EvalError(EvalError::Kind::EvenDivisor, e.pos, input);
          uint64_t mag = static_cast<uint64_t>(-(*lit + 1)) + 1;
          return pow_uint(inv_odd(base), mag);
        }
        Word exp = eval_node(*e.rhs, x, input);
        if ((base.value() & 1) == 0)
          throw EvalError(EvalError::Kind::EvenBaseVarExponent, e.pos, input);
        return pow_mod(base, exp);
      }
      Word a = eval_node(*e.lhs, x, input);
      Word b = eval_node(*e.rhs, x, input);
      switch (e.bin) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if ((b.value() & 1) == 0)
            throw EvalError(EvalError::Kind::EvenDivisor, e.pos, input);
          return a * inv_odd(b);
        case BinaryOp::And: return a & b;
        case BinaryOp::Or: return a | b;
        case BinaryOp::Xor: return a ^ b;
        case BinaryOp::Pow: break;  // handled above
      }
    }
  }
  throw Error("malformed expression node");
}

}  // namespace

TFunction::TFunction(ExprPtr body_, int width_) : body(std::move(body_)), width(width_) {
  mask_bits(width);  // validates range
  if (!body) throw Error("null expression body");
}

TFunction::TFunction(std::string_view text, int width_) : TFunction(parse(text), width_) {}

Word TFunction::operator()(const Word& x) const {
  if (x.width() != width) throw WidthMismatch(x.width(), width);
  g_eval_count.fetch_add(1, std::memory_order_relaxed);
  return eval_node(*body, x, x.value());
}

Word eval(const TFunction& f, const Word& x) { return f(x); }

uint64_t eval_count() { return g_eval_count.load(std::memory_order_relaxed); }

void iterate_visit(const TFunction& f, const Word& x0, uint64_t steps,
                   const std::function<void(uint64_t, const Word&)>& visit) {
  Word x = x0;
  visit(0, x);
  for (uint64_t i = 1; i <= steps; ++i) {
    try {
      x = f(x);
    } catch (EvalError& e) {
      e.step = static_cast<int64_t>(i);
      throw;
    }
    visit(i, x);
  }
}

std::vector<Word> iterate(const TFunction& f, const Word& x0, uint64_t steps) {
  std::vector<Word> out;
  out.reserve(steps + 1);
  iterate_visit(f, x0, steps, [&](uint64_t, const Word& w) { out.push_back(w); });
  return out;
}

TFunction make_transitive(const TFunction& g) {
  ExprPtr xp1 = make_binary(BinaryOp::Add, make_var(), make_lit(1));
  ExprPtr diff = make_binary(BinaryOp::Sub, substitute(g.body, xp1), g.body);
  ExprPtr body = make_binary(
      BinaryOp::Add, make_lit(1),
      make_binary(BinaryOp::Add, make_var(),
                  make_binary(BinaryOp::Mul, make_lit(2), diff)));
  return TFunction(body, g.width);
}

TFunction make_bijective(const TFunction& g, int64_t c) {
  ExprPtr body = make_binary(
      BinaryOp::Add, make_lit(c),
      make_binary(BinaryOp::Add, make_var(),
                  make_binary(BinaryOp::Mul, make_lit(2), g.body)));
  return TFunction(body, g.width);
}

}  // namespace tfun
