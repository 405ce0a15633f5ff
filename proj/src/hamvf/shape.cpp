#include "hamvf/shape.hpp"

#include <algorithm>

#include "hamvf/error.hpp"
#include "hamvf/expr.hpp"

namespace hamvf {

TermShape TermShape::monomial(unsigned h, unsigned k) {
  if (h + k < 1) throw ValidationError("constant is not a term shape");
  if (h > 255 || k > 255) throw ValidationError("monomial degree too large");
  TermShape s;
  s.h_ = static_cast<std::uint8_t>(h);
  s.k_ = static_cast<std::uint8_t>(k);
  return s;
}

TermShape TermShape::trig(TrigFn fn, Var var) {
  TermShape s;
  s.is_trig_ = true;
  s.fn_ = fn;
  s.var_ = var;
  return s;
}

namespace {

unsigned trig_rank(TrigFn fn, Var var) {
  return (fn == TrigFn::sin ? 0u : 2u) + (var == Var::x ? 0u : 1u);
}

}  // namespace

std::size_t TermShape::rank(unsigned max_degree) const noexcept {
  if (is_trig_) return monomial_shape_count(max_degree) + trig_rank(fn_, var_);
  unsigned d = degree();
  return monomial_shape_count(d - 1) + (d - h_);
}

std::strong_ordering operator<=>(const TermShape& a, const TermShape& b) noexcept {
  if (a.is_trig_ != b.is_trig_) return a.is_trig_ ? std::strong_ordering::greater : std::strong_ordering::less;
  if (a.is_trig_) return trig_rank(a.fn_, a.var_) <=> trig_rank(b.fn_, b.var_);
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  return b.h_ <=> a.h_;
}

std::string TermShape::to_string() const {
  if (is_trig_) {
    std::string out = fn_ == TrigFn::sin ? "sin(" : "cos(";
    out += var_ == Var::x ? 'x' : 'y';
    out += ')';
    return out;
  }
  std::string out;
  auto power = [&out](char v, unsigned e) {
    if (e == 0) return;
    if (!out.empty()) out += '*';
    out += v;
    if (e > 1) out += '^' + std::to_string(e);
  };
  power('x', h_);
  power('y', k_);
  return out;
}

std::vector<TermShape> basis_shapes(unsigned max_degree, bool trig) {
  std::vector<TermShape> shapes;
  shapes.reserve(monomial_shape_count(max_degree) + (trig ? 4 : 0));
  for (unsigned d = 1; d <= max_degree; ++d)
    for (unsigned h = d + 1; h-- > 0;) shapes.push_back(TermShape::monomial(h, d - h));
  if (trig) {
    shapes.push_back(TermShape::trig(TrigFn::sin, Var::x));
    shapes.push_back(TermShape::trig(TrigFn::sin, Var::y));
    shapes.push_back(TermShape::trig(TrigFn::cos, Var::x));
    shapes.push_back(TermShape::trig(TrigFn::cos, Var::y));
  }
  return shapes;
}

std::string term_to_string(const Term& term) {
  std::string out;
  if (term.coeff == Rational(-1))
    out = "-";
  else if (!term.coeff.is_one())
    out = term.coeff.to_string() + "*";
  return out + term.shape.to_string();
}

HamFunction::HamFunction(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ValidationError("constant function is not a Hamiltonian");
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.shape < b.shape; });
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coeff.is_zero()) throw ValidationError("zero coefficient in Hamiltonian term list");
    if (i > 0 && terms_[i].shape == terms_[i - 1].shape)
      throw ValidationError("duplicate term " + terms_[i].shape.to_string());
  }
}

std::string HamFunction::to_string() const {
  std::string out;
  for (const auto& term : terms_) {
    std::string piece = term_to_string(term);
    if (out.empty()) {
      out = std::move(piece);
    } else if (piece.front() == '-') {
      out += " - ";
      out.append(piece, 1);
    } else {
      out += " + ";
      out += piece;
    }
  }
  return out;
}

Expr HamFunction::to_expr() const {
  std::vector<Expr> terms;
  terms.reserve(terms_.size());
  for (const auto& [coeff, shape] : terms_) {
    Expr atom = Expr::constant(Rational());
    if (shape.is_trig()) {
      Expr v = Expr::variable(shape.var());
      atom = shape.fn() == TrigFn::sin ? Expr::sin(v) : Expr::cos(v);
      terms.push_back(Expr::mul({Expr::constant(coeff), atom}));
    } else {
      terms.push_back(Expr::mul({Expr::constant(coeff), Expr::pow(Expr::variable(Var::x), static_cast<int>(shape.h())),
                                 Expr::pow(Expr::variable(Var::y), static_cast<int>(shape.k()))}));
    }
  }
  return Expr::add(std::move(terms));
}

HamFunction HamFunction::parse(std::string_view text) { return from_expr(parse_expr(text)); }

HamFunction HamFunction::from_expr(const Expr& e) {
  const std::string text = e.to_string();
  auto form = expand_linear(e);
  if (!form) throw ValidationError("'" + text + "' is not a linear combination of basis terms");
  std::vector<Term> terms;
  for (const auto& [key, coeff] : *form) {
    if (key.trig >= 0) {
      auto fn = key.trig < 2 ? TrigFn::sin : TrigFn::cos;
      auto var = key.trig % 2 == 0 ? Var::x : Var::y;
      terms.push_back({coeff, TermShape::trig(fn, var)});
    } else if (key.h + key.k == 0) {
      throw ValidationError("constant term in '" + text + "' is not a basis term");
    } else {
      terms.push_back({coeff, TermShape::monomial(key.h, key.k)});
    }
  }
  return HamFunction(std::move(terms));
}

}  // namespace hamvf
