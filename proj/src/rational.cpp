#include "rwconv/rational.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "rwconv/error.hpp"

namespace rwconv {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int bit_length(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 128 - std::countl_zero(hi);
  return 64 - std::countl_zero(static_cast<std::uint64_t>(v));
}

[[noreturn]] void overflow() {
  throw Error(ErrorKind::Construction, "rational arithmetic overflowed 64 bits");
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::Construction, "rational with zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(i128 num, i128 den) {
  if (den == 0) throw Error(ErrorKind::Construction, "division by zero in rational arithmetic");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const u128 mag = num < 0 ? static_cast<u128>(-num) : static_cast<u128>(num);
  const u128 g = gcd128(mag, static_cast<u128>(den));
  if (g > 1) {
    num /= static_cast<i128>(g);
    den /= static_cast<i128>(g);
  }
  constexpr i128 lo = std::numeric_limits<std::int64_t>::min() + 1;
  constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) overflow();
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::operator-() const { return from_wide(-static_cast<i128>(num_), den_); }

Rational& Rational::operator+=(const Rational& o) {
  *this = from_wide(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                    static_cast<i128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  *this = from_wide(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw Error(ErrorKind::Construction, "division by zero in rational arithmetic");
  *this = from_wide(static_cast<i128>(num_) * o.den_, static_cast<i128>(den_) * o.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ <=> static_cast<i128>(b.num_) * a.den_;
}

float Rational::to_float() const noexcept {
  if (num_ == 0) return 0.0f;
  const bool negative = num_ < 0;
  const u128 a = negative ? static_cast<u128>(-static_cast<i128>(num_)) : static_cast<u128>(num_);
  const u128 b = static_cast<u128>(den_);

  // Scale so that the quotient carries 24 mantissa bits plus one round bit;
  // the remainder acts as the sticky bit.
  int shift = 25 - (bit_length(a) - bit_length(b));
  u128 q = 0;
  bool sticky = false;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const u128 n = shift >= 0 ? a << shift : a;
    const u128 d = shift >= 0 ? b : b << -shift;
    q = n / d;
    sticky = (n % d) != 0;
    if (q < (u128{1} << 25)) break;
    --shift;
  }
  std::uint64_t mant = static_cast<std::uint64_t>(q >> 1);
  const bool round_bit = (q & 1) != 0;
  if (round_bit && (sticky || (mant & 1))) ++mant;
  const float mag = std::ldexp(static_cast<float>(mant), 1 - shift);
  return negative ? -mag : mag;
}

double Rational::to_double() const noexcept {
  return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

Rational Rational::from_float(float f) {
  if (!std::isfinite(f)) throw Error(ErrorKind::Construction, "non-finite float has no rational value");
  if (f == 0.0f) return Rational{};
  int exp = 0;
  const float frac = std::frexp(f, &exp);
  auto mant = static_cast<std::int64_t>(std::ldexp(frac, 24));
  exp -= 24;
  if (exp >= 0) {
    if (exp > 38) overflow();
    return from_wide(static_cast<i128>(mant) << exp, 1);
  }
  // Strip trailing zero bits first so modest values keep small denominators.
  while (exp < 0 && (mant & 1) == 0) {
    mant /= 2;
    ++exp;
  }
  if (-exp > 62) overflow();
  return from_wide(mant, static_cast<i128>(1) << -exp);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const long long v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Rational(v);
    }
    const std::string p = text.substr(0, slash);
    const std::string q = text.substr(slash + 1);
    const long long num = std::stoll(p, &used);
    if (used != p.size()) throw std::invalid_argument(text);
    const long long den = std::stoll(q, &used);
    if (used != q.size()) throw std::invalid_argument(text);
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Input, "not a rational number: '" + text + "'");
  }
}

}  // namespace rwconv
