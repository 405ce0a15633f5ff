#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "hamvf/rational.hpp"

namespace hamvf {

enum class Var : std::uint8_t { x = 0, y = 1 };
enum class TrigFn : std::uint8_t { sin = 0, cos = 1 };

// A basis term without its coefficient: x^h*y^k (h+k >= 1) or sin/cos of a
// single variable.
//
// Canonical order: monomials by total degree ascending, then h descending;
// then sin(x), sin(y), cos(x), cos(y).
class TermShape {
 public:
  static TermShape monomial(unsigned h, unsigned k);
  static TermShape trig(TrigFn fn, Var var);

  bool is_monomial() const noexcept { return !is_trig_; }
  bool is_trig() const noexcept { return is_trig_; }
  unsigned h() const noexcept { return h_; }
  unsigned k() const noexcept { return k_; }
  unsigned degree() const noexcept { return h_ + k_; }
  TrigFn fn() const noexcept { return fn_; }
  Var var() const noexcept { return var_; }

  // Position in the canonical order among all monomials of any degree,
  // followed by the four trig shapes. `max_degree` fixes where the trig block
  // starts.
  std::size_t rank(unsigned max_degree) const noexcept;

  // "x", "x^2*y", "sin(y)", ...
  std::string to_string() const;

  friend bool operator==(const TermShape&, const TermShape&) noexcept = default;
  friend std::strong_ordering operator<=>(const TermShape& a, const TermShape& b) noexcept;

 private:
  TermShape() = default;
  bool is_trig_ = false;
  std::uint8_t h_ = 0;
  std::uint8_t k_ = 0;
  TrigFn fn_ = TrigFn::sin;
  Var var_ = Var::x;
};

// Number of monomial shapes with 1 <= h+k <= max_degree.
constexpr std::size_t monomial_shape_count(unsigned max_degree) noexcept {
  return static_cast<std::size_t>(max_degree + 1) * (max_degree + 2) / 2 - 1;
}

// All shapes of a basis in canonical order.
std::vector<TermShape> basis_shapes(unsigned max_degree, bool trig);

struct Term {
  Rational coeff;
  TermShape shape;

  friend bool operator==(const Term&, const Term&) = default;
};

class Expr;

// Non-constant linear combination of distinct basis shapes with nonzero
// exact coefficients, stored in canonical shape order.
class HamFunction {
 public:
  // Sorts by shape; throws ValidationError on zero coefficients, duplicate
  // shapes or an empty term list.
  explicit HamFunction(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  // "1/2*x^2 + 1/2*y^2", "-sin(y)", "x - y".
  std::string to_string() const;
  Expr to_expr() const;

  // Parses `text` as an expression and expands it into basis terms.
  static HamFunction parse(std::string_view text);
  static HamFunction from_expr(const Expr& e);

  friend bool operator==(const HamFunction&, const HamFunction&) = default;

 private:
  std::vector<Term> terms_;
};

// "1/2*x^2", "-sin(y)", "x" (coefficient 1 omitted; no leading '+').
std::string term_to_string(const Term& term);

}  // namespace hamvf
