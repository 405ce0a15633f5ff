#include "hamvf/expr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "hamvf/error.hpp"

namespace hamvf {

struct Expr::Node {
  Kind kind;
  Rational value;
  Var var = Var::x;
  int exponent = 0;
  std::vector<Expr> children;
};

namespace {

enum Precedence : int { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

}  // namespace

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
const Rational& Expr::value() const noexcept { return node_->value; }
Var Expr::variable() const noexcept { return node_->var; }
int Expr::exponent() const noexcept { return node_->exponent; }
std::span<const Expr> Expr::children() const noexcept { return node_->children; }

Expr Expr::constant(Rational value) {
  return Expr(std::make_shared<const Node>(Node{Kind::constant, value, Var::x, 0, {}}));
}

Expr Expr::variable(Var var) {
  return Expr(std::make_shared<const Node>(Node{Kind::variable, Rational(), var, 0, {}}));
}

Expr Expr::add(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  Rational constant_sum;
  for (auto& term : terms) {
    if (term.kind() == Kind::add) {
      for (const auto& inner : term.children()) {
        if (inner.is_constant())
          constant_sum = constant_sum + inner.value();
        else
          flat.push_back(inner);
      }
    } else if (term.is_constant()) {
      constant_sum = constant_sum + term.value();
    } else {
      flat.push_back(std::move(term));
    }
  }
  if (!constant_sum.is_zero()) flat.push_back(constant(constant_sum));
  if (flat.empty()) return constant(Rational());
  if (flat.size() == 1) return flat.front();
  return Expr(std::make_shared<const Node>(Node{Kind::add, Rational(), Var::x, 0, std::move(flat)}));
}

Expr Expr::mul(std::vector<Expr> factors) {
  Rational coeff(1);
  std::vector<Expr> flat;
  flat.reserve(factors.size());
  auto absorb = [&](const Expr& f, auto& self) -> void {
    switch (f.kind()) {
      case Kind::constant:
        coeff = coeff * f.value();
        break;
      case Kind::mul:
        for (const auto& inner : f.children()) self(inner, self);
        break;
      case Kind::neg:
        coeff = -coeff;
        self(f.children().front(), self);
        break;
      default:
        flat.push_back(f);
    }
  };
  for (const auto& f : factors) absorb(f, absorb);
  if (coeff.is_zero()) return constant(coeff);

  // collect powers of a repeated base: x * x^-1 -> 1, y * y -> y^2
  std::vector<std::pair<Expr, long long>> powers;
  for (const auto& f : flat) {
    const bool is_pow = f.kind() == Kind::pow;
    const Expr& base = is_pow ? f.children().front() : f;
    const long long e = is_pow ? f.exponent() : 1;
    auto it = std::find_if(powers.begin(), powers.end(), [&](const auto& p) { return p.first == base; });
    if (it == powers.end())
      powers.emplace_back(base, e);
    else
      it->second += e;
  }
  if (powers.size() < flat.size()) {
    flat.clear();
    for (auto& [base, e] : powers) {
      if (e == 0) continue;
      if (e < std::numeric_limits<int>::min() || e > std::numeric_limits<int>::max())
        throw ValidationError("exponent overflow");
      Expr f = pow(base, static_cast<int>(e));
      if (f.is_constant())
        coeff = coeff * f.value();
      else
        flat.push_back(std::move(f));
    }
  }
  if (coeff.is_zero() || flat.empty()) return constant(coeff);
  if (flat.size() == 1) {
    if (coeff.is_one()) return flat.front();
    if (coeff == Rational(-1)) return neg(flat.front());
  }
  if (!coeff.is_one()) flat.insert(flat.begin(), constant(coeff));
  return Expr(std::make_shared<const Node>(Node{Kind::mul, Rational(), Var::x, 0, std::move(flat)}));
}

Expr Expr::neg(Expr operand) {
  switch (operand.kind()) {
    case Kind::constant:
      return constant(-operand.value());
    case Kind::neg:
      return operand.children().front();
    case Kind::mul: {
      std::vector<Expr> factors{constant(Rational(-1))};
      factors.insert(factors.end(), operand.children().begin(), operand.children().end());
      return mul(std::move(factors));
    }
    case Kind::add: {
      std::vector<Expr> terms;
      for (const auto& t : operand.children()) terms.push_back(neg(t));
      return add(std::move(terms));
    }
    default:
      return Expr(std::make_shared<const Node>(Node{Kind::neg, Rational(), Var::x, 0, {std::move(operand)}}));
  }
}

Expr Expr::pow(Expr base, int exponent) {
  if (exponent == 0) return constant(Rational(1));
  if (exponent == 1) return base;
  if (base.is_constant() && !(base.is_zero() && exponent < 0)) return constant(base.value().pow(exponent));
  if (base.kind() == Kind::pow) {
    long long combined = static_cast<long long>(base.exponent()) * exponent;
    if (combined >= std::numeric_limits<int>::min() && combined <= std::numeric_limits<int>::max())
      return pow(base.children().front(), static_cast<int>(combined));
  }
  return Expr(std::make_shared<const Node>(Node{Kind::pow, Rational(), Var::x, exponent, {std::move(base)}}));
}

Expr Expr::sin(Expr arg) {
  if (arg.is_zero()) return constant(Rational());
  return Expr(std::make_shared<const Node>(Node{Kind::sin, Rational(), Var::x, 0, {std::move(arg)}}));
}

Expr Expr::cos(Expr arg) {
  if (arg.is_zero()) return constant(Rational(1));
  return Expr(std::make_shared<const Node>(Node{Kind::cos, Rational(), Var::x, 0, {std::move(arg)}}));
}

Expr Expr::ln(Expr arg) {
  if (arg.is_constant() && arg.value().is_one()) return constant(Rational());
  return Expr(std::make_shared<const Node>(Node{Kind::ln, Rational(), Var::x, 0, {std::move(arg)}}));
}

bool operator==(const Expr& a, const Expr& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::constant:
      return a.value() == b.value();
    case Expr::Kind::variable:
      return a.variable() == b.variable();
    case Expr::Kind::pow:
      if (a.exponent() != b.exponent()) return false;
      break;
    default:
      break;
  }
  auto ca = a.children();
  auto cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i] == cb[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::constant:
      if (e.value().sign() < 0) return kUnary;
      return e.value().is_integer() ? kAtom : kProduct;
    case Expr::Kind::add:
      return kSum;
    case Expr::Kind::mul:
      return kProduct;
    case Expr::Kind::neg:
      return kUnary;
    case Expr::Kind::pow:
      return kPower;
    default:
      return kAtom;
  }
}

void print(const Expr& e, std::string& out, int context);

void print_wrapped(const Expr& e, std::string& out, int context) {
  if (precedence(e) < context) {
    out += '(';
    print(e, out, 0);
    out += ')';
  } else {
    print(e, out, context);
  }
}

void print_call(const char* name, const Expr& e, std::string& out) {
  out += name;
  out += '(';
  print(e.children().front(), out, 0);
  out += ')';
}

void print(const Expr& e, std::string& out, int context) {
  switch (e.kind()) {
    case Expr::Kind::constant:
      out += e.value().to_string();
      return;
    case Expr::Kind::variable:
      out += e.variable() == Var::x ? 'x' : 'y';
      return;
    case Expr::Kind::add: {
      bool first = true;
      for (const auto& term : e.children()) {
        std::string piece;
        print_wrapped(term, piece, kSum);
        if (first) {
          out += piece;
        } else if (piece.front() == '-') {
          out += " - ";
          out.append(piece, 1);
        } else {
          out += " + ";
          out += piece;
        }
        first = false;
      }
      return;
    }
    case Expr::Kind::mul: {
      auto factors = e.children();
      std::size_t i = 0;
      if (factors.front().is_constant()) {
        const Rational& c = factors.front().value();
        if (c == Rational(-1))
          out += '-';
        else
          out += c.to_string() + "*";
        i = 1;
      }
      for (bool first = true; i < factors.size(); ++i, first = false) {
        if (!first) out += '*';
        // A product operand binds at least as tight as a power so that
        // "x*(y*z)" and "x*-y" never appear.
        print_wrapped(factors[i], out, kPower);
      }
      return;
    }
    case Expr::Kind::neg:
      out += '-';
      print_wrapped(e.children().front(), out, kPower);
      return;
    case Expr::Kind::pow:
      print_wrapped(e.children().front(), out, kAtom);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    case Expr::Kind::sin:
      print_call("sin", e, out);
      return;
    case Expr::Kind::cos:
      print_call("cos", e, out);
      return;
    case Expr::Kind::ln:
      print_call("ln", e, out);
      return;
  }
  (void)context;
}

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  print(*this, out, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Calculus

Expr differentiate(const Expr& e, Var var) {
  using Kind = Expr::Kind;
  switch (e.kind()) {
    case Kind::constant:
      return Expr::constant(Rational());
    case Kind::variable:
      return Expr::constant(Rational(e.variable() == var ? 1 : 0));
    case Kind::add: {
      std::vector<Expr> terms;
      for (const auto& t : e.children()) terms.push_back(differentiate(t, var));
      return Expr::add(std::move(terms));
    }
    case Kind::mul: {
      auto factors = e.children();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        Expr d = differentiate(factors[i], var);
        if (d.is_zero()) continue;
        std::vector<Expr> product(factors.begin(), factors.end());
        product[i] = std::move(d);
        terms.push_back(Expr::mul(std::move(product)));
      }
      return Expr::add(std::move(terms));
    }
    case Kind::neg:
      return Expr::neg(differentiate(e.children().front(), var));
    case Kind::pow: {
      const Expr& base = e.children().front();
      Expr d = differentiate(base, var);
      if (d.is_zero()) return d;
      return Expr::mul({Expr::constant(Rational(e.exponent())), Expr::pow(base, e.exponent() - 1), std::move(d)});
    }
    case Kind::sin: {
      const Expr& arg = e.children().front();
      Expr d = differentiate(arg, var);
      if (d.is_zero()) return d;
      return Expr::mul({Expr::cos(arg), std::move(d)});
    }
    case Kind::cos: {
      const Expr& arg = e.children().front();
      Expr d = differentiate(arg, var);
      if (d.is_zero()) return d;
      return Expr::mul({Expr::neg(Expr::sin(arg)), std::move(d)});
    }
    case Kind::ln: {
      const Expr& arg = e.children().front();
      Expr d = differentiate(arg, var);
      if (d.is_zero()) return d;
      return Expr::mul({std::move(d), Expr::pow(arg, -1)});
    }
  }
  return Expr::constant(Rational());
}

namespace {

double eval_raw(const Expr& e, double x, double y) noexcept {
  using Kind = Expr::Kind;
  switch (e.kind()) {
    case Kind::constant:
      return e.value().to_double();
    case Kind::variable:
      return e.variable() == Var::x ? x : y;
    case Kind::add: {
      double acc = 0.0;
      for (const auto& t : e.children()) acc += eval_raw(t, x, y);
      return acc;
    }
    case Kind::mul: {
      double acc = 1.0;
      for (const auto& f : e.children()) acc *= eval_raw(f, x, y);
      return acc;
    }
    case Kind::neg:
      return -eval_raw(e.children().front(), x, y);
    case Kind::pow:
      return std::pow(eval_raw(e.children().front(), x, y), e.exponent());
    case Kind::sin:
      return std::sin(eval_raw(e.children().front(), x, y));
    case Kind::cos:
      return std::cos(eval_raw(e.children().front(), x, y));
    case Kind::ln:
      return std::log(eval_raw(e.children().front(), x, y));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double evaluate(const Expr& e, double x, double y) noexcept {
  double v = eval_raw(e, x, y);
  return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
}

CompiledExpr::CompiledExpr(const Expr& e) { emit(e, 0); }

void CompiledExpr::emit(const Expr& e, int depth) {
  using Kind = Expr::Kind;
  max_depth_ = std::max(max_depth_, depth + 1);
  switch (e.kind()) {
    case Kind::constant:
      code_.push_back({Op::push_const, 0, e.value().to_double()});
      return;
    case Kind::variable:
      code_.push_back({e.variable() == Var::x ? Op::push_x : Op::push_y, 0, 0.0});
      return;
    case Kind::add:
    case Kind::mul: {
      auto children = e.children();
      for (std::size_t i = 0; i < children.size(); ++i) emit(children[i], depth + static_cast<int>(i));
      code_.push_back({e.kind() == Kind::add ? Op::add : Op::mul, static_cast<int>(children.size()), 0.0});
      return;
    }
    case Kind::neg:
      emit(e.children().front(), depth);
      code_.push_back({Op::neg, 0, 0.0});
      return;
    case Kind::pow:
      emit(e.children().front(), depth);
      code_.push_back({Op::pow, e.exponent(), 0.0});
      return;
    case Kind::sin:
      emit(e.children().front(), depth);
      code_.push_back({Op::sin, 0, 0.0});
      return;
    case Kind::cos:
      emit(e.children().front(), depth);
      code_.push_back({Op::cos, 0, 0.0});
      return;
    case Kind::ln:
      emit(e.children().front(), depth);
      code_.push_back({Op::ln, 0, 0.0});
      return;
  }
}

double CompiledExpr::operator()(double x, double y) const noexcept {
  constexpr int kInline = 64;
  std::array<double, kInline> inline_stack;
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (max_depth_ > kInline) {
    heap_stack.resize(static_cast<std::size_t>(max_depth_));
    stack = heap_stack.data();
  }
  int top = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::push_const:
        stack[top++] = in.value;
        break;
      case Op::push_x:
        stack[top++] = x;
        break;
      case Op::push_y:
        stack[top++] = y;
        break;
      case Op::add: {
        top -= in.arg;
        double acc = 0.0;
        for (int i = 0; i < in.arg; ++i) acc += stack[top + i];
        stack[top++] = acc;
        break;
      }
      case Op::mul: {
        top -= in.arg;
        double acc = 1.0;
        for (int i = 0; i < in.arg; ++i) acc *= stack[top + i];
        stack[top++] = acc;
        break;
      }
      case Op::neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::pow:
        stack[top - 1] = std::pow(stack[top - 1], in.arg);
        break;
      case Op::sin:
        stack[top - 1] = std::sin(stack[top - 1]);
        break;
      case Op::cos:
        stack[top - 1] = std::cos(stack[top - 1]);
        break;
      case Op::ln:
        stack[top - 1] = std::log(stack[top - 1]);
        break;
    }
  }
  if (top == 0) return std::numeric_limits<double>::quiet_NaN();
  double v = stack[0];
  return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------------------
// Linear expansion

namespace {

std::optional<LinearForm> multiply(const LinearForm& a, const LinearForm& b) {
  LinearForm out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      bool a_const = ka.trig < 0 && ka.h + ka.k == 0;
      bool b_const = kb.trig < 0 && kb.h + kb.k == 0;
      LinearKey key;
      if (ka.trig >= 0 || kb.trig >= 0) {
        // trig terms only combine with constants
        if (!(a_const || b_const)) return std::nullopt;
        key = a_const ? kb : ka;
      } else {
        key = {ka.h + kb.h, ka.k + kb.k, -1};
      }
      Rational c = out[key] + ca * cb;
      if (c.is_zero())
        out.erase(key);
      else
        out[key] = c;
    }
  }
  return out;
}

void accumulate(LinearForm& into, const LinearForm& from, const Rational& scale) {
  for (const auto& [k, c] : from) {
    Rational v = into[k] + scale * c;
    if (v.is_zero())
      into.erase(k);
    else
      into[k] = v;
  }
}

}  // namespace

std::optional<LinearForm> expand_linear(const Expr& e) {
  using Kind = Expr::Kind;
  switch (e.kind()) {
    case Kind::constant: {
      LinearForm f;
      if (!e.is_zero()) f[{0, 0, -1}] = e.value();
      return f;
    }
    case Kind::variable:
      return LinearForm{{e.variable() == Var::x ? LinearKey{1, 0, -1} : LinearKey{0, 1, -1}, Rational(1)}};
    case Kind::add: {
      LinearForm sum;
      for (const auto& t : e.children()) {
        auto part = expand_linear(t);
        if (!part) return std::nullopt;
        accumulate(sum, *part, Rational(1));
      }
      return sum;
    }
    case Kind::mul: {
      LinearForm product{{{0, 0, -1}, Rational(1)}};
      for (const auto& f : e.children()) {
        auto part = expand_linear(f);
        if (!part) return std::nullopt;
        auto next = multiply(product, *part);
        if (!next) return std::nullopt;
        product = std::move(*next);
      }
      return product;
    }
    case Kind::neg: {
      auto inner = expand_linear(e.children().front());
      if (!inner) return std::nullopt;
      LinearForm out;
      accumulate(out, *inner, Rational(-1));
      return out;
    }
    case Kind::pow: {
      if (e.exponent() < 0) return std::nullopt;
      auto base = expand_linear(e.children().front());
      if (!base) return std::nullopt;
      LinearForm product{{{0, 0, -1}, Rational(1)}};
      for (int i = 0; i < e.exponent(); ++i) {
        auto next = multiply(product, *base);
        if (!next) return std::nullopt;
        product = std::move(*next);
      }
      return product;
    }
    case Kind::sin:
    case Kind::cos: {
      const Expr& arg = e.children().front();
      if (arg.kind() != Kind::variable) return std::nullopt;
      int rank = (e.kind() == Kind::sin ? 0 : 2) + (arg.variable() == Var::x ? 0 : 1);
      return LinearForm{{LinearKey{0, 0, rank}, Rational(1)}};
    }
    case Kind::ln:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace hamvf
