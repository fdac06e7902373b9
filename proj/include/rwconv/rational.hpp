#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace rwconv {

// Exact rational number with 64-bit numerator and denominator, always kept in
// lowest terms with a positive denominator. Arithmetic goes through 128-bit
// intermediates and throws ErrorKind::Construction if a reduced result does
// not fit back into 64 bits.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  // Nearest fp32 value (correctly rounded, ties to even).
  float to_float() const noexcept;
  double to_double() const noexcept;
  // Exact value of a finite float.
  static Rational from_float(float f);

  // "p/q", or "p" for integers.
  std::string str() const;
  // Parses "p", "-p" or "p/q".
  static Rational parse(const std::string& text);

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace rwconv
