#include "hamvf/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "hamvf/error.hpp"

namespace hamvf {

std::vector<Rational> builtin_delta(unsigned l) {
  switch (l) {
    case 3:
      return {Rational(-1), Rational(0), Rational(1)};
    case 5:
      return {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
    case 7:
      return {Rational(-1), Rational(-2, 3), Rational(-1, 3), Rational(0), Rational(1, 3), Rational(2, 3), Rational(1)};
    case 9:
      return {Rational(-1),   Rational(-3, 4), Rational(-1, 2), Rational(-1, 4), Rational(0),
              Rational(1, 4), Rational(1, 2),  Rational(3, 4),  Rational(1)};
    default:
      throw ValidationError("no built-in coefficient set of size " + std::to_string(l));
  }
}

BasisSpec BasisSpec::make(unsigned max_degree, std::vector<Rational> delta, bool trig) {
  if (max_degree < 1 || max_degree > 64) throw ValidationError("basis degree must be in [1, 64]");
  if (delta.size() < 2) throw ValidationError("coefficient set needs at least two values");
  std::sort(delta.begin(), delta.end());
  if (std::adjacent_find(delta.begin(), delta.end()) != delta.end())
    throw ValidationError("coefficient set has duplicate values");
  if (!std::binary_search(delta.begin(), delta.end(), Rational()))
    throw ValidationError("coefficient set must contain 0");
  BasisSpec spec;
  spec.max_degree = max_degree;
  spec.trig = trig;
  spec.delta = std::move(delta);
  spec.delta_name = "custom";
  for (unsigned l : {3u, 5u, 7u, 9u})
    if (spec.delta == builtin_delta(l)) spec.delta_name = "d" + std::to_string(l);
  return spec;
}

namespace {

unsigned parse_suffix(std::string_view text, char prefix, const char* what) {
  unsigned value = 0;
  if (text.size() < 2 || (text.front() != prefix && text.front() != std::toupper(prefix)))
    throw ValidationError(std::string("malformed ") + what + " '" + std::string(text) + "'");
  auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ValidationError(std::string("malformed ") + what + " '" + std::string(text) + "'");
  return value;
}

}  // namespace

BasisSpec BasisSpec::from_names(std::string_view basis, std::string_view delta, bool trig) {
  if (basis.ends_with('*')) {
    trig = true;
    basis.remove_suffix(1);
  }
  unsigned degree = parse_suffix(basis, 'b', "basis");
  unsigned l = parse_suffix(delta, 'd', "coefficient set");
  return make(degree, builtin_delta(l), trig);
}

std::size_t BasisSpec::shape_count() const noexcept {
  return monomial_shape_count(max_degree) + (trig ? 4 : 0);
}

std::string BasisSpec::name() const {
  return "b" + std::to_string(max_degree) + (trig ? "*" : "") + "-" + delta_name;
}

BigInt cardinality(const BasisSpec& spec) {
  BigInt total = boost::multiprecision::pow(BigInt(spec.delta.size()), static_cast<unsigned>(spec.shape_count()));
  return total - 1;
}

Corpus::Corpus(BasisSpec spec) : spec_(std::move(spec)), shapes_(spec_.shapes()), size_(cardinality(spec_)) {
  digit_values_.push_back(Rational());
  for (const auto& c : spec_.delta)
    if (!c.is_zero()) digit_values_.push_back(c);
}

std::vector<unsigned> Corpus::digits_of(const BigInt& index) const {
  if (index < 0 || index >= size_)
    throw ValidationError("corpus index " + to_string(index) + " out of range [0, " + to_string(size_) + ")");
  BigInt numeral = index + 1;
  std::vector<unsigned> digits(shapes_.size());
  const unsigned l = radix();
  for (auto& d : digits) {
    d = static_cast<unsigned>(numeral % l);
    numeral /= l;
  }
  return digits;
}

HamFunction Corpus::from_digits(const std::vector<unsigned>& digits) const {
  std::vector<Term> terms;
  for (std::size_t s = 0; s < shapes_.size(); ++s)
    if (digits[s] != 0) terms.push_back({digit_values_[digits[s]], shapes_[s]});
  return HamFunction(std::move(terms));
}

HamFunction Corpus::function_at(const BigInt& index) const { return from_digits(digits_of(index)); }

BigInt Corpus::index_of(const HamFunction& f) const {
  std::vector<unsigned> digits(shapes_.size(), 0);
  for (const auto& [coeff, shape] : f.terms()) {
    auto it = std::find(shapes_.begin(), shapes_.end(), shape);
    if (it == shapes_.end())
      throw ValidationError("term " + shape.to_string() + " is not in basis " + spec_.name());
    auto c = std::find(digit_values_.begin(), digit_values_.end(), coeff);
    if (c == digit_values_.end())
      throw ValidationError("coefficient " + coeff.to_string() + " is not in " + spec_.delta_name);
    digits[static_cast<std::size_t>(it - shapes_.begin())] = static_cast<unsigned>(c - digit_values_.begin());
  }
  BigInt numeral = 0;
  for (std::size_t s = digits.size(); s-- > 0;) numeral = numeral * radix() + digits[s];
  return numeral - 1;
}

CorpusEnumerator::CorpusEnumerator(const Corpus& corpus, const BigInt& lo, const BigInt& hi)
    : corpus_(&corpus), position_(lo), end_(hi) {
  if (lo < 0 || lo > hi || hi > corpus.size())
    throw ValidationError("enumeration range [" + to_string(lo) + ", " + to_string(hi) + ") out of bounds");
  if (lo < hi) digits_ = corpus.digits_of(lo);
}

std::optional<HamFunction> CorpusEnumerator::next() {
  if (position_ >= end_) return std::nullopt;
  HamFunction f = corpus_->from_digits(digits_);
  ++position_;
  const unsigned l = corpus_->radix();
  for (auto& d : digits_) {
    if (++d < l) break;
    d = 0;
  }
  return f;
}

BigInt parse_bigint(std::string_view text) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ValidationError("malformed non-negative integer '" + std::string(text) + "'");
  return BigInt(std::string(text));
}

std::string to_string(const BigInt& value) { return value.str(); }

}  // namespace hamvf
