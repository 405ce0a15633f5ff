#include <cctype>
#include <string>
#include <vector>

#include "hamvf/error.hpp"
#include "hamvf/expr.hpp"

namespace hamvf {
namespace {

// Recursive-descent parser for
//
//   sum      = product { ("+" | "-") product } ;
//   product  = [ "+" | "-" ] unary { ("*" | "/") unary } ;   (-a*b is -(a*b))
//   unary    = ("+" | "-") unary | power ;
//   power    = primary [ "^" exponent { "^" exponent } ] ;     (right-associative)
//   exponent = [ "+" | "-" ] integer | "(" [ "+" | "-" ] integer ")" ;
//   primary  = number | identifier | func "(" sum ")" | "(" sum ")" ;
class Parser {
 public:
  Parser(std::string_view text, const Constants& constants) : text_(text), constants_(constants) {}

  Expr run() {
    skip_space();
    if (at_end()) fail("empty expression");
    Expr e = sum();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }
  [[noreturn]] void fail_at(const std::string& message, std::size_t pos) const { throw ParseError(message, pos); }

  bool at_end() const { return pos_ >= text_.size(); }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr sum() {
    std::vector<Expr> terms{product()};
    for (;;) {
      if (accept('+'))
        terms.push_back(product());
      else if (accept('-'))
        terms.push_back(Expr::neg(product()));
      else
        break;
    }
    return terms.size() == 1 ? terms.front() : Expr::add(std::move(terms));
  }

  Expr product() {
    bool negate = false;
    if (accept('-'))
      negate = true;
    else
      accept('+');
    Expr acc = unary();
    for (;;) {
      skip_space();
      std::size_t op_pos = pos_;
      if (accept('*')) {
        acc = Expr::mul({acc, unary()});
      } else if (accept('/')) {
        Expr divisor = unary();
        if (divisor.is_zero()) fail_at("division by zero", op_pos);
        acc = Expr::mul({acc, Expr::pow(divisor, -1)});
      } else {
        return negate ? Expr::neg(std::move(acc)) : acc;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::neg(unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    skip_space();
    std::size_t start = pos_;
    std::vector<int> chain{exponent()};
    while (accept('^')) chain.push_back(exponent());
    // fold a^b^c as a^(b^c); every intermediate must stay an integer
    Rational e(chain.back());
    for (std::size_t i = chain.size() - 1; i-- > 0;) {
      if (!e.is_integer() || e.num() > 64 || e.num() < -64) fail_at("exponent out of range", start);
      try {
        e = Rational(chain[i]).pow(static_cast<int>(e.num()));
      } catch (const ValidationError&) {
        fail_at("exponent out of range", start);
      }
    }
    if (!e.is_integer() || e.num() > 1'000'000 || e.num() < -1'000'000) fail_at("non-integer exponent", start);
    return Expr::pow(base, static_cast<int>(e.num()));
  }

  int exponent() {
    skip_space();
    std::size_t start = pos_;
    bool parens = accept('(');
    bool negative = false;
    if (accept('-'))
      negative = true;
    else
      accept('+');
    skip_space();
    if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail_at("non-integer exponent", start);
    std::size_t digits_start = pos_;
    Rational value = number();
    if (!value.is_integer() || value.num() > 1'000'000) fail_at("non-integer exponent", digits_start);
    if (parens) expect(')');
    int e = static_cast<int>(value.num());
    return negative ? -e : e;
  }

  Rational number() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (!at_end() && text_[pos_] == '.') {
      ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    try {
      return Rational::parse(text_.substr(start, pos_ - start));
    } catch (const ValidationError& e) {
      fail_at(e.what(), start);
    }
  }

  Expr primary() {
    skip_space();
    if (at_end()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(number());
    if (c == '(') {
      ++pos_;
      Expr inner = sum();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      if (name == "x") return Expr::variable(Var::x);
      if (name == "y") return Expr::variable(Var::y);
      if (name == "sin" || name == "cos" || name == "ln" || name == "log") {
        expect('(');
        Expr arg = sum();
        expect(')');
        if (name == "sin") return Expr::sin(arg);
        if (name == "cos") return Expr::cos(arg);
        return Expr::ln(arg);
      }
      if (auto it = constants_.find(name); it != constants_.end()) return Expr::constant(it->second);
      fail_at("unknown identifier '" + std::string(name) + "'", start);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  const Constants& constants_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, const Constants& constants) {
  try {
    return Parser(text, constants).run();
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    // arithmetic overflow while folding constants
    throw ParseError(e.what(), 0);
  }
}

}  // namespace hamvf
