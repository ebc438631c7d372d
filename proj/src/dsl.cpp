#include "wck/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "wck/error.hpp"

namespace wck {

namespace {

constexpr int kMaxExponent = 256;

struct Token {
  enum class Type { Number, Ident, Op, End };
  Type type = Type::End;
  std::string text;
  char op = 0;
  bool integral = false;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    Token t;
    t.offset = pos_;
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      t.integral = true;
      if (pos_ < s_.size() && s_[pos_] == '.') {
        t.integral = false;
        ++pos_;
        while (pos_ < s_.size() &&
               std::isdigit(static_cast<unsigned char>(s_[pos_])))
          ++pos_;
      }
      t.text = std::string(s_.substr(b, pos_ - b));
      if (t.text == ".")
        throw ParseError(ParseError::Code::Syntax, b, "malformed number");
      t.type = Token::Type::Number;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      t.text = std::string(s_.substr(b, pos_ - b));
      t.type = Token::Type::Ident;
      return t;
    }
    if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
      ++pos_;
      t.type = Token::Type::Op;
      t.op = c;
      return t;
    }
    throw ParseError(ParseError::Code::Syntax, pos_,
                     std::string("unexpected character '") + c + "'");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

double number_value(const Token& t) {
  double v = 0.0;
  auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (r.ec != std::errc() || r.ptr != t.text.data() + t.text.size())
    throw ParseError(ParseError::Code::Syntax, t.offset, "malformed number");
  return v;
}

OpExpr make(OpExpr::Kind k, std::size_t off) {
  OpExpr e;
  e.kind = k;
  e.offset = off;
  return e;
}

OpExpr binary(OpExpr::Kind k, OpExpr a, OpExpr b, std::size_t off) {
  OpExpr e = make(k, off);
  e.children.push_back(std::move(a));
  e.children.push_back(std::move(b));
  return e;
}

bool known_generator(const std::string& s) {
  return s == "x" || s == "y" || s == "Dx" || s == "Dy" || s == "xi" ||
         s == "eta";
}

class Parser {
 public:
  explicit Parser(std::string_view s) : lex_(s) { advance(); }

  OpExpr parse() {
    if (tok_.type == Token::Type::End)
      throw ParseError(ParseError::Code::Syntax, tok_.offset, "empty expression");
    OpExpr e = expr();
    if (tok_.type != Token::Type::End)
      throw ParseError(ParseError::Code::Syntax, tok_.offset,
                       "unexpected token '" + describe(tok_) + "'");
    return e;
  }

 private:
  void advance() { tok_ = lex_.next(); }

  bool is_op(char c) const { return tok_.type == Token::Type::Op && tok_.op == c; }

  static std::string describe(const Token& t) {
    if (t.type == Token::Type::Op) return std::string(1, t.op);
    if (t.type == Token::Type::End) return "end of input";
    return t.text;
  }

  OpExpr expr() {
    OpExpr lhs = term();
    while (is_op('+') || is_op('-')) {
      char op = tok_.op;
      std::size_t off = tok_.offset;
      advance();
      OpExpr rhs = term();
      if (op == '-') {
        OpExpr neg = make(OpExpr::Kind::Negation, off);
        neg.children.push_back(std::move(rhs));
        rhs = std::move(neg);
      }
      lhs = binary(OpExpr::Kind::Sum, std::move(lhs), std::move(rhs), off);
    }
    return lhs;
  }

  OpExpr term() {
    OpExpr lhs = factor();
    for (;;) {
      std::size_t off = tok_.offset;
      if (is_op('*')) {
        advance();
        lhs = binary(OpExpr::Kind::Product, std::move(lhs), factor(), off);
      } else if (is_op('/')) {
        advance();
        if (tok_.type != Token::Type::Number)
          throw ParseError(ParseError::Code::Syntax, tok_.offset,
                           "division only by a nonzero numeric literal");
        double d = number_value(tok_);
        if (d == 0.0)
          throw ParseError(ParseError::Code::Syntax, tok_.offset,
                           "division by zero");
        OpExpr c = make(OpExpr::Kind::Constant, tok_.offset);
        c.value = 1.0 / d;
        advance();
        lhs = binary(OpExpr::Kind::Product, std::move(lhs), std::move(c), off);
      } else if (is_op('(')) {
        lhs = binary(OpExpr::Kind::Product, std::move(lhs), factor(), off);
      } else {
        return lhs;
      }
    }
  }

  OpExpr factor() {
    if (is_op('-')) {
      OpExpr neg = make(OpExpr::Kind::Negation, tok_.offset);
      advance();
      neg.children.push_back(factor());
      return neg;
    }
    OpExpr base = atom();
    std::vector<std::pair<int, std::size_t>> exps;
    while (is_op('^')) {
      advance();
      if (tok_.type != Token::Type::Number || !tok_.integral) {
        std::string why = (is_op('-') || tok_.type == Token::Type::Number)
                              ? "exponent must be a nonnegative integer"
                              : "exponent must be an unsigned integer literal";
        throw ParseError(ParseError::Code::BadExponent, tok_.offset, why);
      }
      long v = std::strtol(tok_.text.c_str(), nullptr, 10);
      if (tok_.text.size() > 4 || v > kMaxExponent)
        throw ParseError(ParseError::Code::BadExponent, tok_.offset,
                         "exponent too large");
      exps.emplace_back(int(v), tok_.offset);
      advance();
    }
    if (exps.empty()) return base;
    // right-associative: x^a^b = x^(a^b)
    long e = exps.back().first;
    for (int t = int(exps.size()) - 2; t >= 0; --t) {
      long r = 1;
      for (int s = 0; s < e; ++s) {
        r *= exps[t].first;
        if (r > kMaxExponent)
          throw ParseError(ParseError::Code::BadExponent, exps[t].second,
                           "exponent too large");
      }
      e = r;
    }
    OpExpr p = make(OpExpr::Kind::Power, exps.front().second);
    p.exponent = int(e);
    p.children.push_back(std::move(base));
    return p;
  }

  OpExpr atom() {
    if (tok_.type == Token::Type::Number) {
      OpExpr c = make(OpExpr::Kind::Constant, tok_.offset);
      c.value = number_value(tok_);
      advance();
      return c;
    }
    if (tok_.type == Token::Type::Ident) {
      std::size_t off = tok_.offset;
      if (tok_.text == "i") {
        OpExpr c = make(OpExpr::Kind::Constant, off);
        c.value = cplx(0.0, 1.0);
        advance();
        return c;
      }
      if (!known_generator(tok_.text))
        throw ParseError(ParseError::Code::UnknownIdentifier, off,
                         "unknown identifier '" + tok_.text + "'");
      OpExpr g = make(OpExpr::Kind::Generator, off);
      g.gen = tok_.text;
      advance();
      return g;
    }
    if (is_op('(')) {
      advance();
      OpExpr e = expr();
      if (!is_op(')'))
        throw ParseError(ParseError::Code::Syntax, tok_.offset,
                         "expected ')' but found '" + describe(tok_) + "'");
      advance();
      return e;
    }
    throw ParseError(ParseError::Code::Syntax, tok_.offset,
                     "unexpected token '" + describe(tok_) + "'");
  }

  Lexer lex_;
  Token tok_;
};

template <class T, class GenFn>
T lower_impl(const OpExpr& e, GenFn gen) {
  switch (e.kind) {
    case OpExpr::Kind::Constant:
      return T::constant(e.value);
    case OpExpr::Kind::Generator:
      return gen(e);
    case OpExpr::Kind::Sum:
      return lower_impl<T>(e.children[0], gen) + lower_impl<T>(e.children[1], gen);
    case OpExpr::Kind::Product:
      return lower_impl<T>(e.children[0], gen) * lower_impl<T>(e.children[1], gen);
    case OpExpr::Kind::Power:
      return lower_impl<T>(e.children[0], gen).pow(e.exponent);
    case OpExpr::Kind::Negation:
      return -lower_impl<T>(e.children[0], gen);
  }
  return T();
}

std::string coeff_text(cplx c, bool has_monomial, bool& negative) {
  double re = c.real(), im = c.imag();
  if (im == 0.0) {
    negative = re < 0.0;
    double m = std::abs(re);
    if (m == 1.0 && has_monomial) return "";
    return format_number(m);
  }
  if (re == 0.0) {
    negative = im < 0.0;
    double m = std::abs(im);
    return m == 1.0 ? "i" : format_number(m) + "*i";
  }
  negative = re < 0.0;
  if (negative) {
    re = -re;
    im = -im;
  }
  return "(" + format_number(re) + (im < 0.0 ? " - " : " + ") +
         format_number(std::abs(im)) + "*i)";
}

template <std::size_t N>
std::string format_terms(const std::map<std::array<int, N>, cplx>& terms,
                         const std::array<const char*, N>& names) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms) {
    std::string mono;
    for (std::size_t a = 0; a < N; ++a) {
      if (k[a] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[a];
      if (k[a] > 1) mono += "^" + std::to_string(k[a]);
    }
    bool neg = false;
    std::string ct = coeff_text(c, !mono.empty(), neg);
    std::string body = ct.empty() ? mono : (mono.empty() ? ct : ct + "*" + mono);
    if (first)
      out += neg ? "-" + body : body;
    else
      out += (neg ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

}  // namespace

OpExpr parse_op(std::string_view text) { return Parser(text).parse(); }

WeylOp lower(const OpExpr& expr) {
  return lower_impl<WeylOp>(expr, [](const OpExpr& g) {
    if (g.gen == "x") return WeylOp::M1();
    if (g.gen == "y") return WeylOp::M2();
    if (g.gen == "Dx") return WeylOp::D1();
    if (g.gen == "Dy") return WeylOp::D2();
    throw ParseError(ParseError::Code::WrongMode, g.offset,
                     "polynomial variable '" + g.gen +
                         "' in an operator expression");
  });
}

Poly2 lower_poly(const OpExpr& expr) {
  return lower_impl<Poly2>(expr, [](const OpExpr& g) {
    if (g.gen == "xi") return Poly2::var(0);
    if (g.gen == "eta") return Poly2::var(1);
    throw ParseError(ParseError::Code::WrongMode, g.offset,
                     "operator generator '" + g.gen +
                         "' in a polynomial expression");
  });
}

WeylOp parse_weyl(std::string_view text) { return lower(parse_op(text)); }

Poly2 parse_poly2(std::string_view text) { return lower_poly(parse_op(text)); }

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[512];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (r.ec != std::errc()) return "0";
  return std::string(buf, r.ptr);
}

std::string format_op(const WeylOp& op) {
  return format_terms<4>(op.terms(), {"x", "y", "Dx", "Dy"});
}

std::string format_poly(const Poly2& p) {
  return format_terms<2>(p.terms(), {"xi", "eta"});
}

std::string format_symbol(const Poly4& a) {
  return format_terms<4>(a.terms(), {"x", "y", "xi", "eta"});
}

std::string to_sexpr(const OpExpr& e) {
  switch (e.kind) {
    case OpExpr::Kind::Constant: {
      std::string s = format_number(std::abs(e.value.real()));
      if (e.value.real() < 0) s = "-" + s;
      if (e.value.imag() != 0.0) s += "+" + format_number(e.value.imag()) + "i";
      return "const " + s;
    }
    case OpExpr::Kind::Generator:
      return "gen " + e.gen;
    case OpExpr::Kind::Sum:
      return "sum(" + to_sexpr(e.children[0]) + "," + to_sexpr(e.children[1]) + ")";
    case OpExpr::Kind::Product:
      return "product(" + to_sexpr(e.children[0]) + "," + to_sexpr(e.children[1]) +
             ")";
    case OpExpr::Kind::Power:
      return "power(" + to_sexpr(e.children[0]) + "," + std::to_string(e.exponent) +
             ")";
    case OpExpr::Kind::Negation:
      return "neg(" + to_sexpr(e.children[0]) + ")";
  }
  return "";
}

}  // namespace wck
