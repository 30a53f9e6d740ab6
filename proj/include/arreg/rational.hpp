#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace arreg {

/// Exact rational with 64-bit numerator/denominator, always normalized
/// (den > 0, gcd(num, den) == 1). Arithmetic goes through 128-bit
/// intermediates and throws InvalidArgument on overflow.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  /// Accepts "p/q", integers, and finite decimals ("0.125").
  static Rational parse(std::string_view text);

  /// count <= (*this) * total, evaluated without rounding.
  bool bounds_count(std::uint64_t count, std::uint64_t total) const noexcept;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) noexcept = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace arreg
