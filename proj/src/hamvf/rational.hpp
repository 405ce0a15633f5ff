#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace hamvf {

// Exact rational number with 64-bit numerator/denominator.
// Invariant: den >= 1 and gcd(|num|, den) == 1; zero is 0/1.
// Arithmetic that overflows int64 throws ValidationError.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_one() const noexcept { return num_ == 1 && den_ == 1; }
  bool is_integer() const noexcept { return den_ == 1; }
  int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  // "p" for integers, "p/q" otherwise.
  std::string to_string() const;
  // Always "p/q" (used by the vocabulary file).
  std::string to_fraction_string() const;

  // Accepts "p", "p/q", and decimals "a.b" with at most 9 fractional digits.
  // A leading sign is allowed.
  static Rational parse(std::string_view text);
  // Shortest round-trip decimal of a double, converted exactly.
  static Rational from_double(double value);

  Rational abs() const noexcept { return num_ < 0 ? Rational(-num_, den_, Raw{}) : *this; }
  Rational pow(int exponent) const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) noexcept = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

 private:
  struct Raw {};
  constexpr Rational(std::int64_t num, std::int64_t den, Raw) noexcept : num_(num), den_(den) {}
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace hamvf
