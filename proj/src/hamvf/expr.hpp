#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hamvf/rational.hpp"
#include "hamvf/shape.hpp"

namespace hamvf {

// Immutable expression tree over x, y and exact rational constants.
//
// Nodes are built only through the factory functions, which apply a shallow
// simplification: nested sums/products are flattened, constants folded,
// zeros and unit factors dropped, negation pushed into sums and product
// coefficients. There is no further canonicalization.
class Expr {
 public:
  enum class Kind : std::uint8_t { constant, variable, add, mul, neg, pow, sin, cos, ln };

  static Expr constant(Rational value);
  static Expr variable(Var var);
  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr neg(Expr operand);
  static Expr pow(Expr base, int exponent);
  static Expr sin(Expr arg);
  static Expr cos(Expr arg);
  static Expr ln(Expr arg);

  Kind kind() const noexcept;
  // Valid for Kind::constant.
  const Rational& value() const noexcept;
  // Valid for Kind::variable.
  Var variable() const noexcept;
  // Valid for Kind::pow.
  int exponent() const noexcept;
  // Operands: terms of a sum, factors of a product, the single operand of
  // neg/pow/sin/cos/ln.
  std::span<const Expr> children() const noexcept;

  bool is_constant() const noexcept { return kind() == Kind::constant; }
  bool is_zero() const noexcept { return is_constant() && value().is_zero(); }

  // Infix form in the documented grammar; parse(to_string(e)) rebuilds e for
  // every tree the factories can produce.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b) noexcept;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Named constants substituted while parsing (e.g. "rho0" -> 1).
using Constants = std::map<std::string, Rational, std::less<>>;

// Parses the infix grammar (see docs/grammar.md). Throws ParseError.
Expr parse_expr(std::string_view text, const Constants& constants = {});

// Exact partial derivative, shallow-simplified.
Expr differentiate(const Expr& e, Var var);

// IEEE double evaluation; any non-finite result comes back as NaN.
double evaluate(const Expr& e, double x, double y) noexcept;

// Flat postfix program equivalent to evaluate(), for hot loops.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);

  double operator()(double x, double y) const noexcept;

 private:
  enum class Op : std::uint8_t { push_const, push_x, push_y, add, mul, neg, pow, sin, cos, ln };
  struct Instr {
    Op op;
    int arg;  // arity for add/mul, exponent for pow
    double value;
  };
  void emit(const Expr& e, int depth);

  std::vector<Instr> code_;
  int max_depth_ = 0;
};

// A sum of c * x^h * y^k * [trig] terms with at most one trig factor and no
// product of a trig factor with a monomial. `trig` is -1 for a pure
// monomial (h = k = 0 is the constant term), otherwise the rank 0..3 of
// sin(x), sin(y), cos(x), cos(y).
struct LinearKey {
  unsigned h = 0;
  unsigned k = 0;
  int trig = -1;

  friend auto operator<=>(const LinearKey&, const LinearKey&) = default;
};
using LinearForm = std::map<LinearKey, Rational>;

// Expands `e` into a LinearForm with zero coefficients removed, or nullopt
// if it is not such a combination (ln, negative powers, trig of non-variable
// arguments, trig times anything non-constant).
std::optional<LinearForm> expand_linear(const Expr& e);

}  // namespace hamvf
