#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamvf/shape.hpp"

namespace hamvf {

using BigInt = boost::multiprecision::cpp_int;

// Basis B_i or B_i* together with its coefficient set.
struct BasisSpec {
  unsigned max_degree = 1;
  bool trig = false;
  std::vector<Rational> delta;  // ascending, distinct, contains 0
  std::string delta_name;       // "d3" for the built-ins, "custom" otherwise

  // "b2" / "d5" / trig flag, as accepted on the command line.
  static BasisSpec from_names(std::string_view basis, std::string_view delta, bool trig);
  static BasisSpec make(unsigned max_degree, std::vector<Rational> delta, bool trig);

  std::size_t shape_count() const noexcept;
  std::vector<TermShape> shapes() const { return basis_shapes(max_degree, trig); }
  // "b2-d3", "b2*-d3"
  std::string name() const;

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

// {-1, 0, 1}, {-1, -1/2, 0, 1/2, 1}, thirds, quarters.
std::vector<Rational> builtin_delta(unsigned l);

// l^S - 1: every coefficient assignment except the all-zero one.
BigInt cardinality(const BasisSpec& spec);

// Random access into Ham(B, delta).
//
// Index j corresponds to the base-l numeral j+1 over the S canonically
// ordered shapes, least significant digit first. Digit d selects the d-th
// entry of [0, delta\{0} ascending], so digit 0 always means "term absent"
// and only the numeral 0 is the zero function.
class Corpus {
 public:
  explicit Corpus(BasisSpec spec);

  const BasisSpec& spec() const noexcept { return spec_; }
  const std::vector<TermShape>& shapes() const noexcept { return shapes_; }
  const BigInt& size() const noexcept { return size_; }

  // Coefficient selected by a digit.
  const Rational& digit_value(unsigned digit) const noexcept { return digit_values_[digit]; }
  unsigned radix() const noexcept { return static_cast<unsigned>(digit_values_.size()); }

  HamFunction function_at(const BigInt& index) const;
  BigInt index_of(const HamFunction& f) const;

  // Digits of index+1; throws ValidationError when out of range.
  std::vector<unsigned> digits_of(const BigInt& index) const;
  HamFunction from_digits(const std::vector<unsigned>& digits) const;

 private:
  BasisSpec spec_;
  std::vector<TermShape> shapes_;
  std::vector<Rational> digit_values_;
  BigInt size_;
};

// Streams function_at(j) for j in [lo, hi) with an odometer over the digits.
class CorpusEnumerator {
 public:
  CorpusEnumerator(const Corpus& corpus, const BigInt& lo, const BigInt& hi);

  std::optional<HamFunction> next();
  const BigInt& position() const noexcept { return position_; }

 private:
  const Corpus* corpus_;
  std::vector<unsigned> digits_;
  BigInt position_;
  BigInt end_;
};

BigInt parse_bigint(std::string_view text);
std::string to_string(const BigInt& value);

}  // namespace hamvf
