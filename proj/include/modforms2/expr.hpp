#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "modforms2/rational.hpp"

// A small expression language over the series environment. Grammar, with the
// usual precedence (^ binds tighter than unary minus, then * /, then + -),
// left-associative binary operators:
//
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' ['-'] integer)?
//   atom    := integer | name | name '(' expr ')' | '(' expr ')'
//
// Functions: delta, dlog, dz, scale2, neg, lam, lam2. Integer literals only;
// rationals are spelled as quotients. Unary minus parses to neg(...).

namespace modforms2 {

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t offset)
      : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Literal, Name, Add, Sub, Mul, Div, Pow, Call };

  Kind kind;
  std::size_t offset = 0;     // byte offset in the source text
  Rational literal;           // Literal
  std::string name;           // Name, or the function of a Call
  ExprPtr lhs, rhs;           // binary nodes; Pow uses lhs + exponent
  long exponent = 0;          // Pow only (literal integer, possibly negative)
  std::vector<ExprPtr> args;  // Call
};

inline ExprPtr make_literal(Rational v, std::size_t off = 0) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Literal;
  e->literal = std::move(v);
  e->offset = off;
  return e;
}

inline ExprPtr make_name(std::string n, std::size_t off = 0) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Name;
  e->name = std::move(n);
  e->offset = off;
  return e;
}

inline ExprPtr make_binary(Expr::Kind k, ExprPtr a, ExprPtr b, std::size_t off = 0) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  e->offset = off;
  return e;
}

inline ExprPtr make_pow(ExprPtr base, long k, std::size_t off = 0) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Pow;
  e->lhs = std::move(base);
  e->exponent = k;
  e->offset = off;
  return e;
}

inline ExprPtr make_call(std::string fn, std::vector<ExprPtr> args, std::size_t off = 0) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Call;
  e->name = std::move(fn);
  e->args = std::move(args);
  e->offset = off;
  return e;
}

inline bool is_known_function(const std::string& name) {
  return name == "delta" || name == "dlog" || name == "dz" || name == "scale2" ||
         name == "neg" || name == "lam" || name == "lam2";
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string text) : text_(std::move(text)) {}

  ExprPtr parse() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("expected end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw parse_error(expected, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eof() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!accept(c)) fail("expected '" + std::string(1, c) + "' (" + what + ")");
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    for (;;) {
      std::size_t off = mark();
      if (accept('+'))
        e = make_binary(Expr::Kind::Add, e, parse_term(), off);
      else if (accept('-'))
        e = make_binary(Expr::Kind::Sub, e, parse_term(), off);
      else
        return e;
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_unary();
    for (;;) {
      std::size_t off = mark();
      if (accept('*'))
        e = make_binary(Expr::Kind::Mul, e, parse_unary(), off);
      else if (accept('/'))
        e = make_binary(Expr::Kind::Div, e, parse_unary(), off);
      else
        return e;
    }
  }

  ExprPtr parse_unary() {
    std::size_t off = mark();
    if (accept('-')) return make_call("neg", {parse_unary()}, off);
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    std::size_t off = mark();
    if (!accept('^')) return base;
    bool negative = accept('-');
    std::size_t digits_at = mark();
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) {
      pos_ = digits_at;
      fail("expected integer exponent after '^'");
    }
    long k = parse_integer_digits();
    return make_pow(base, negative ? -k : k, off);
  }

  long parse_integer_digits() {
    skip_ws();
    long v = 0;
    bool any = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1000000) fail("exponent too large");
      ++pos_;
      any = true;
    }
    if (!any) fail("expected digits");
    return v;
  }

  ExprPtr parse_atom() {
    skip_ws();
    std::size_t off = pos_;
    if (eof()) fail("expected expression");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        digits += text_[pos_++];
      return make_literal(rational_from_string(digits), off);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        name += text_[pos_++];
      if (peek() == '(') {
        if (!is_known_function(name))
          throw parse_error("unknown function '" + name + "'", off);
        ++pos_;
        std::vector<ExprPtr> args;
        args.push_back(parse_expr());
        while (accept(',')) args.push_back(parse_expr());
        expect(')', "closing function call");
        if (args.size() != 1)
          throw parse_error("function '" + name + "' takes exactly one argument", off);
        return make_call(name, std::move(args), off);
      }
      return make_name(std::move(name), off);
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_expr();
      expect(')', "closing parenthesis");
      return e;
    }
    fail("expected expression");
  }

  std::size_t mark() {
    skip_ws();
    return pos_;
  }

  std::string text_;
  std::size_t pos_ = 0;
};

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Pow:
      return 4;
    case Expr::Kind::Call:
      return e.name == "neg" ? 3 : 5;  // neg prints as prefix minus
    default:
      return 5;  // atoms
  }
}

inline void print_expr(std::string& out, const ExprPtr& e, int parent_prec, bool right_side) {
  int prec = precedence(*e);
  bool parens = prec < parent_prec || (prec == parent_prec && right_side && parent_prec <= 2);
  if (parens) out += '(';
  switch (e->kind) {
    case Expr::Kind::Literal:
      out += rational_pretty(e->literal);
      break;
    case Expr::Kind::Name:
      out += e->name;
      break;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div: {
      const char* op = e->kind == Expr::Kind::Add   ? " + "
                       : e->kind == Expr::Kind::Sub ? " - "
                       : e->kind == Expr::Kind::Mul ? "*"
                                                    : "/";
      print_expr(out, e->lhs, prec, false);
      out += op;
      print_expr(out, e->rhs, prec, true);
      break;
    }
    case Expr::Kind::Pow:
      print_expr(out, e->lhs, prec + 1, false);
      out += '^';
      if (e->exponent < 0) {
        out += '-';
        out += std::to_string(-e->exponent);
      } else {
        out += std::to_string(e->exponent);
      }
      break;
    case Expr::Kind::Call:
      if (e->name == "neg") {
        out += "-";
        print_expr(out, e->args[0], 3, false);  // binds tighter than * /
        break;
      }
      out += e->name;
      out += '(';
      print_expr(out, e->args[0], 0, false);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

inline ExprPtr parse(const std::string& text) { return detail::Parser(text).parse(); }

inline std::string print(const ExprPtr& e) {
  std::string out;
  detail::print_expr(out, e, 0, false);
  return out;
}

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Literal:
      return a->literal == b->literal;
    case Expr::Kind::Name:
      return a->name == b->name;
    case Expr::Kind::Pow:
      return a->exponent == b->exponent && expr_equal(a->lhs, b->lhs);
    case Expr::Kind::Call:
      return a->name == b->name && a->args.size() == b->args.size() &&
             expr_equal(a->args[0], b->args[0]);
    default:
      return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
}

}  // namespace modforms2
