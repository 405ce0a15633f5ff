#include "hamvf/rational.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "hamvf/error.hpp"

namespace hamvf {
namespace {

__int128 wide_gcd(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool parse_digits(std::string_view digits, __int128& out) {
  if (digits.empty()) return false;
  out = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + (c - '0');
    if (out > std::numeric_limits<std::int64_t>::max()) return false;
  }
  return true;
}

}  // namespace

Rational::Rational(std::int64_t num) : num_(num), den_(1) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  constexpr __int128 lo = std::numeric_limits<std::int64_t>::min() + 1;
  constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw ValidationError("rational overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den), Raw{});
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::to_fraction_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  __int128 num = 0;
  __int128 den = 1;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    if (!parse_digits(text.substr(0, slash), num) || !parse_digits(text.substr(slash + 1), den))
      throw ValidationError("malformed rational '" + std::string(text) + "'");
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 9) throw ValidationError("decimal literal with more than 9 fractional digits");
    if (frac.empty()) throw ValidationError("malformed decimal");
    __int128 w = 0;
    __int128 f = 0;
    if (!whole.empty() && !parse_digits(whole, w)) throw ValidationError("malformed decimal");
    if (!frac.empty() && !parse_digits(frac, f)) throw ValidationError("malformed decimal");
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    num = w * den + f;
  } else if (!parse_digits(text, num)) {
    throw ValidationError("malformed rational '" + std::string(text) + "'");
  }
  return from_wide(negative ? -num : num, den);
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw ValidationError("non-finite constant");
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc{}) throw ValidationError("constant out of range");
  return parse(std::string_view(buf, end - buf));
}

Rational Rational::pow(int exponent) const {
  if (exponent < 0) {
    if (num_ == 0) throw ValidationError("zero raised to a negative power");
    return Rational(1) / pow(-exponent);
  }
  Rational result(1);
  Rational base = *this;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e != 0) base = base * base;
  }
  return result;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw ValidationError("division by zero");
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

Rational Rational::operator-() const { return Rational(-num_, den_, Raw{}); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
}

}  // namespace hamvf
